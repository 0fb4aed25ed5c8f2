#pragma once

#include <utility>

#include "censmix/basis.hpp"
#include "censmix/model.hpp"

namespace censmix {

// Divide values and window endpoints by sigma; n_total unchanged.
std::pair<SampleBatch, CensorWindow> standardize(const SampleBatch& batch,
                                                 const CensorWindow& window, double sigma);

// m_hat_i = (1/n_total) sum_s f_i(x_s) over observed values, for
// i = 1..2k-1. Each f_i = sum_a beta_{i,a} h_a is collapsed to monomial
// coefficients once; accumulation is compensated with a fixed reduction
// tree, so the result does not depend on evaluation order.
MomentVector estimate_moments(const SampleBatch& batch, const EstimatorBasis& basis);

// Single-index variant (i = 0 gives the m_0 diagnostic, expected ~1).
double estimate_moment_component(const SampleBatch& batch, const EstimatorBasis& basis, int i);

// Monomial coefficients of f_i = sum_a beta_{i,a} h_a (accumulated in
// extended precision, returned as doubles).
std::vector<double> collapse_basis_polynomial(const EstimatorBasis& basis, int i);

}  // namespace censmix
