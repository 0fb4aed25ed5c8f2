#include "censmix/verify.hpp"

#include <cmath>
#include <sstream>

#include "censmix/linalg.hpp"
#include "censmix/quadrature.hpp"

namespace censmix {
namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CheckResult check_orthogonality_limit() {
    CheckResult r{"orthogonality_limit", false, ""};
    const BasisMatrix V = build_V(10, CensorWindow::symmetric(10.0));
    double worst = 0.0;
    for (int row = 0; row < 10; ++row)
        for (int col = 0; col < 10; ++col) {
            const double target = row == col ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(V.at(row, col) - target));
        }
    r.passed = worst <= 1e-8;
    r.detail = "max |V - I| entry = " + fmt(worst);
    return r;
}

CheckResult check_oracle_agreement(VerifyLevel level) {
    CheckResult r{"quadrature_oracle_agreement", false, ""};
    const std::vector<double> radii =
        level == VerifyLevel::full ? std::vector<double>{0.5, 1.0, 2.0, 4.0}
                                   : std::vector<double>{1.0, 2.0};
    const int max_index = level == VerifyLevel::full ? 12 : 8;
    double worst = 0.0;
    for (double R : radii) {
        const CensorWindow w = CensorWindow::symmetric(R);
        for (int c = 0; c <= max_index; ++c) {
            const HermitePoly hc = hermite_coefficients(c);
            for (int rr = 0; rr <= max_index; ++rr) {
                const HermitePoly hr = hermite_coefficients(rr);
                const double closed = compute_J(c, rr, w);
                const double fact = detail::factorial_of<double>(rr);
                auto integrand = [&](double x) {
                    return std::exp(-0.5 * x * x) * hermite_eval(hc, x) * hermite_eval(hr, x) /
                           (std::sqrt(2.0 * M_PI) * fact);
                };
                const double oracle = quadrature::integrate(integrand, w.lower, w.upper, 1e-13);
                const double scale = std::max({std::abs(closed), std::abs(oracle), 1e-30});
                worst = std::max(worst, std::abs(closed - oracle) / scale);
            }
        }
    }
    r.passed = worst <= 1e-9;
    r.detail = "max relative disagreement = " + fmt(worst);
    return r;
}

CheckResult check_det_identity() {
    CheckResult r{"det_v_identity_ell2", false, ""};
    double worst = 0.0;
    for (double R : {1.0, 2.0}) {
        const CensorWindow w = CensorWindow::symmetric(R);
        const double lu_det = determinant(build_V(2, w));
        auto integrand = [](double x0, double x1) {
            const double d = x0 - x1;
            return std::exp(-0.5 * (x0 * x0 + x1 * x1)) * d * d;
        };
        const double integral = quadrature::integrate_triangle(integrand, w.lower, w.upper, 1e-11);
        const double oracle = integral / (2.0 * M_PI);  // (1/sqrt(2pi))^2 * 1/(0! 1!)
        worst = std::max(worst, std::abs(lu_det - oracle) / std::abs(oracle));
    }
    r.passed = worst <= 1e-8;
    r.detail = "max relative error vs 2-D quadrature = " + fmt(worst);
    return r;
}

MixtureModel reference_model() {
    MixtureModel m;
    m.k = 2;
    m.weights = {0.5, 0.5};
    m.means = {-0.5, 0.5};
    m.sigma = 1.0;
    m.mean_bound = 1.0;
    return m;
}

CheckResult check_bias_decay(VerifyLevel level) {
    CheckResult r{"bias_decay", false, ""};
    const MixtureModel model = reference_model();
    const CensorWindow w = CensorWindow::symmetric(1.0);
    const std::vector<int> ells = level == VerifyLevel::full ? std::vector<int>{6, 8, 10, 12, 14}
                                                             : std::vector<int>{6, 10, 14};
    std::vector<double> biases;
    for (int ell : ells) biases.push_back(max_oracle_moment_bias(model, w, model.k, ell));
    bool decreasing = true;
    for (size_t i = 1; i < biases.size(); ++i)
        if (!(biases[i] < biases[i - 1])) decreasing = false;
    std::ostringstream detail;
    detail << "bias:";
    for (size_t i = 0; i < biases.size(); ++i)
        detail << " ell=" << ells[i] << ":" << fmt(biases[i]);
    bool tail_ok = true;
    if (level == VerifyLevel::full) {
        const double b16 = max_oracle_moment_bias(model, w, model.k, 16);
        tail_ok = b16 < 1e-6;
        detail << " ell=16:" << fmt(b16);
    }
    r.passed = decreasing && tail_ok;
    r.detail = detail.str();
    return r;
}

CheckResult check_recovery_grid() {
    CheckResult r{"exact_moment_recovery", false, ""};
    double worst = 0.0;
    for (const MixtureModel& model : recovery_test_grid()) {
        const MomentVector m = mixing_moments(model, 2 * model.k - 1);
        const DenoiseResult den = denoise(m, model.k, model.mean_bound);
        const MatchReport match =
            match_parameters(den.weights, den.means, model.weights, model.means);
        worst = std::max({worst, match.max_weight_err, match.max_mean_err});
    }
    r.passed = worst <= 1e-6;
    r.detail = "max parameter error over grid = " + fmt(worst);
    return r;
}

CheckResult check_variance_scaling() {
    CheckResult r{"variance_scaling", false, ""};
    const MixtureModel model = reference_model();
    const CensorWindow w = CensorWindow::symmetric(1.0);
    const int ell = 6;
    const double var_n = empirical_moment_variance(model, w, ell, 10000, 100, 424200);
    const double var_2n = empirical_moment_variance(model, w, ell, 20000, 100, 424201);
    const double ratio = var_n / var_2n;
    r.passed = ratio >= 1.6 && ratio <= 2.5;
    r.detail = "Var(n)/Var(2n) = " + fmt(ratio);
    return r;
}

}  // namespace

double max_oracle_moment_bias(const MixtureModel& model, const CensorWindow& w, int k, int ell) {
    // Everything stays in extended precision: once ell grows, |beta| reaches
    // 1e12 and beyond, and a double-rounded beta would bury the tail bias
    // under rounding of the cancellation in alpha E(f_i).
    std::vector<BigFloat> entries(static_cast<size_t>(ell) * static_cast<size_t>(ell));
    for (int row = 0; row < ell; ++row)
        for (int col = 0; col < ell; ++col)
            entries[static_cast<size_t>(row * ell + col)] = compute_J_t<BigFloat>(col, row, w);
    DenseLU<BigFloat> lu(ell, entries);
    const MomentVector m = mixing_moments(model, 2 * k - 1);
    double worst = 0.0;
    std::vector<BigFloat> e(static_cast<size_t>(ell), BigFloat(0));
    for (int i = 1; i <= 2 * k - 1; ++i) {
        e[static_cast<size_t>(i)] = 1;
        const std::vector<BigFloat> beta = lu.solve(e);
        e[static_cast<size_t>(i)] = 0;
        // f_i in extended-precision monomial coefficients
        std::vector<BigFloat> coeffs(static_cast<size_t>(ell), BigFloat(0));
        for (int a = 0; a < ell; ++a) {
            if (beta[static_cast<size_t>(a)] == 0) continue;
            const HermitePoly h = hermite_coefficients(a);
            for (int p = 0; p <= a; ++p)
                coeffs[static_cast<size_t>(p)] +=
                    beta[static_cast<size_t>(a)] * BigFloat(h.monomial_coeffs[static_cast<size_t>(p)]);
        }
        const BigFloat expect =
            censored_poly_expectation<BigFloat>(model.weights, model.means, w, coeffs);
        const double bias = std::abs((expect - BigFloat(m.m(i))).convert_to<double>());
        worst = std::max(worst, bias);
    }
    return worst;
}

std::vector<MixtureModel> recovery_test_grid() {
    std::vector<MixtureModel> grid;
    auto add = [&](std::vector<double> weights, std::vector<double> means) {
        MixtureModel m;
        m.k = static_cast<int>(weights.size());
        m.weights = std::move(weights);
        m.means = std::move(means);
        m.sigma = 1.0;
        m.mean_bound = 3.0;
        grid.push_back(std::move(m));
    };
    // k = 1
    add({1.0}, {-2.0});
    add({1.0}, {0.0});
    add({1.0}, {1.3});
    // k = 2, weights from {0.2, 0.3, 0.5} summing to one
    add({0.5, 0.5}, {-1.0, 1.0});
    add({0.5, 0.5}, {-2.0, -0.5});
    add({0.5, 0.5}, {0.3, 1.9});
    add({0.5, 0.5}, {-1.7, 0.8});
    // k = 3
    add({0.2, 0.3, 0.5}, {-2.0, -0.5, 1.0});
    add({0.3, 0.2, 0.5}, {-1.5, 0.0, 1.5});
    add({0.5, 0.3, 0.2}, {-1.0, 0.2, 1.9});
    return grid;
}

double empirical_moment_variance(const MixtureModel& model, const CensorWindow& w, int ell,
                                 std::int64_t n, int seeds, std::uint64_t seed_base) {
    const BasisMatrix V = build_V(ell, w);
    const EstimatorBasis basis = solve_basis(V, model.k);
    std::vector<double> estimates;
    estimates.reserve(static_cast<size_t>(seeds));
    for (int s = 0; s < seeds; ++s) {
        const SampleBatch batch = sample(model, w, n, seed_base + static_cast<std::uint64_t>(s));
        estimates.push_back(estimate_moment_component(batch, basis, 1));
    }
    double mean = 0.0;
    for (double v : estimates) mean += v;
    mean /= static_cast<double>(estimates.size());
    double var = 0.0;
    for (double v : estimates) var += (v - mean) * (v - mean);
    return var / static_cast<double>(estimates.size() - 1);
}

VerifyReport verify_suite(VerifyLevel level) {
    VerifyReport report;
    report.checks.push_back(check_orthogonality_limit());
    report.checks.push_back(check_oracle_agreement(level));
    report.checks.push_back(check_det_identity());
    report.checks.push_back(check_bias_decay(level));
    report.checks.push_back(check_recovery_grid());
    if (level == VerifyLevel::full) report.checks.push_back(check_variance_scaling());
    return report;
}

}  // namespace censmix
