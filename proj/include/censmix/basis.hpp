#pragma once

#include <vector>

#include "censmix/gauss_moments.hpp"
#include "censmix/hermite.hpp"

namespace censmix {

// ell x ell matrix with (r,c)-entry J_{h_c,r}; row-major.
struct BasisMatrix {
    int ell = 0;
    CensorWindow window{-1.0, 1.0};
    std::vector<double> entries;
    double condition_estimate = 0.0;  // 1-norm condition estimate

    double at(int r, int c) const {
        return entries[static_cast<size_t>(r) * static_cast<size_t>(ell) + static_cast<size_t>(c)];
    }
};

// Coefficient vectors beta_i solving V beta_i = e_i for i = 0..2k-1.
// The i=0 row is a diagnostic only (m_0 = 1 is known).
struct EstimatorBasis {
    int ell = 0;
    int k = 0;
    CensorWindow window{-1.0, 1.0};
    std::vector<std::vector<double>> betas;  // betas[i][a], i = 0..2k-1
    std::vector<double> residual_norms;      // inf-norm of V beta_i - e_i
    bool extended_precision = false;         // true if the solve escalated
};

struct TailBiasRow {
    std::vector<double> tail_coeffs;  // J_{f_i,j} for j = ell..j_max
    double bias_bound = 0.0;          // sum_j |J_{f_i,j}| M^j (truncated majorant)
};

struct TailBiasReport {
    int j_max = 0;
    std::vector<TailBiasRow> rows;  // indexed by i = 0..2k-1
};

// Escalate to extended precision above this basis size.
inline constexpr int kDoublePrecisionEllLimit = 12;

BasisMatrix build_V(int ell, const CensorWindow& w);

EstimatorBasis solve_basis(const BasisMatrix& V, int k);

// Residual contract enforced by solve_basis.
inline constexpr double kResidualTolerance = 1e-9;

double determinant(const BasisMatrix& V);

// Tail coefficients J_{f_i,j} for j = ell..j_max and the truncated bias
// majorant sum_j |J_{f_i,j}| M^j. Computed in extended precision.
TailBiasReport tail_bias(const EstimatorBasis& basis, double M, int j_max);

// Default basis size: max(2(2k-1)+2, ceil(3 k ln(1/eps))).
int default_ell(int k, double epsilon);

}  // namespace censmix
