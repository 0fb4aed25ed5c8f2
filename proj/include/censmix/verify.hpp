#pragma once

#include <string>
#include <vector>

#include "censmix/pipeline.hpp"

namespace censmix {

enum class VerifyLevel { fast, full };

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Runs the numerical identity and statistical-property checks:
// orthogonality limit, quadrature-oracle agreement, the det(V) integral
// identity at ell = 2, the oracle bias-decay curve, the exact-moment
// recovery grid, and (full level) the variance scaling in n.
VerifyReport verify_suite(VerifyLevel level);

// Max over i = 1..2k-1 of |alpha E(f_i(X)) - m_i| with the sampling-free
// closed-form expectation (extended precision throughout).
double max_oracle_moment_bias(const MixtureModel& model, const CensorWindow& w, int k, int ell);

// Models for the exact-moment recovery checks (k <= 3, M = 3).
std::vector<MixtureModel> recovery_test_grid();

// Empirical Var(m_hat_1) over `seeds` seeds at sample size n.
double empirical_moment_variance(const MixtureModel& model, const CensorWindow& w, int ell,
                                 std::int64_t n, int seeds, std::uint64_t seed_base);

}  // namespace censmix
