#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "censmix/gauss_moments.hpp"
#include "censmix/hermite.hpp"

namespace censmix {

// Frame marker for moment vectors: raw (original sigma) or standardized
// (sigma = 1).
enum class Frame { raw, standardized };

// Mixing-distribution moments m_1..m_order.
struct MomentVector {
    int order = 0;
    std::vector<double> values;  // values[j-1] = m_j
    Frame frame = Frame::standardized;

    double m(int j) const { return j == 0 ? 1.0 : values[static_cast<size_t>(j - 1)]; }
};

// Ground-truth or estimated mixture of k homogeneous Gaussians.
struct MixtureModel {
    int k = 1;
    std::vector<double> weights;
    std::vector<double> means;
    double sigma = 1.0;
    double mean_bound = 1.0;  // M, with |mean_i| < M

    void validate() const;
};

// Censored draws: observed values plus the total draw count (failures
// included). Only the failure count is retained, not the fail positions.
struct SampleBatch {
    std::int64_t n_total = 0;
    std::vector<double> values;
    std::uint64_t seed = 0;

    std::int64_t n_observed() const { return static_cast<std::int64_t>(values.size()); }
    std::int64_t n_failed() const { return n_total - n_observed(); }
};

// m_j = sum_i w_i (mu_i / sigma)^j for j = 1..j_max (standardized frame).
MomentVector mixing_moments(const MixtureModel& m, int j_max);

// Survival probability alpha = sum_i w_i I_{mu_i,sigma^2}(S).
double alpha_mass(const MixtureModel& m, const CensorWindow& w);

// Deterministic censored sampling: per-draw substreams keyed on (seed, draw
// index), inverse-CDF normal draws, so batches are independent of iteration
// order and identical across runs.
SampleBatch sample(const MixtureModel& m, const CensorWindow& w, std::int64_t n,
                   std::uint64_t seed);

// alpha * E(p(X)) = int_S p(x) sum_i w_i g_{mu_i,1}(x) dx in closed form
// (sigma = 1 frame). Sampling-free ground truth for bias tests.
double exact_censored_expectation(const MixtureModel& m, const CensorWindow& w,
                                  const HermitePoly& p);

// Same contraction for an arbitrary monomial-coefficient polynomial.
template <class Real>
Real censored_poly_expectation(const std::vector<double>& weights,
                               const std::vector<double>& means, const CensorWindow& w,
                               const std::vector<Real>& coeffs);

// Standard normal helpers.
double inverse_normal_cdf(double p);
double normal_cdf(double x);

// Sample file format: header line "# n_total=<n> seed=<seed> R=<R>
// sigma=<sigma>", then one record per line (decimal value or FAIL).
void write_batch(const std::string& path, const SampleBatch& batch, double R, double sigma);

struct BatchFile {
    SampleBatch batch;
    double R = 0.0;
    double sigma = 1.0;
};

BatchFile read_batch(const std::string& path);

// --- implementation of the templated expectation ---

template <class Real>
Real censored_poly_expectation(const std::vector<double>& weights,
                               const std::vector<double>& means, const CensorWindow& w,
                               const std::vector<Real>& coeffs) {
    using std::sqrt;
    const int degree = static_cast<int>(coeffs.size()) - 1;
    // Binomial table up to the polynomial degree.
    std::vector<std::vector<Real>> binom(static_cast<size_t>(degree) + 1);
    for (int p = 0; p <= degree; ++p) {
        binom[static_cast<size_t>(p)].assign(static_cast<size_t>(p) + 1, Real(1));
        for (int q = 1; q < p; ++q)
            binom[static_cast<size_t>(p)][static_cast<size_t>(q)] =
                binom[static_cast<size_t>(p - 1)][static_cast<size_t>(q - 1)] +
                binom[static_cast<size_t>(p - 1)][static_cast<size_t>(q)];
    }
    Real total = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
        const Real mu = Real(means[i]);
        // Shift to t = x - mu: int x^p g(x-mu) dx = sum_q C(p,q) mu^{p-q} G_q.
        const CensorWindow shifted(w.lower - means[i], w.upper - means[i]);
        const auto g = window_moment_table<Real>(degree, shifted);
        Real comp = 0;
        for (int p = 0; p <= degree; ++p) {
            if (coeffs[static_cast<size_t>(p)] == 0) continue;
            Real term = 0;
            Real mu_pow = 1;  // mu^{p-q} built from q = p downward
            for (int q = p; q >= 0; --q) {
                term += binom[static_cast<size_t>(p)][static_cast<size_t>(q)] * mu_pow *
                        g[static_cast<size_t>(q)];
                mu_pow *= mu;
            }
            comp += coeffs[static_cast<size_t>(p)] * term;
        }
        total += Real(weights[i]) * comp;
    }
    return total / sqrt(boost::math::constants::two_pi<Real>());
}

}  // namespace censmix
