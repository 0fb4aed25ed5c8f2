#include <doctest.h>

#include <cmath>

#include "censmix/basis.hpp"
#include "censmix/quadrature.hpp"

using namespace censmix;

namespace {

// Independent cofactor-expansion determinant for the Cramer cross-checks.
// Runs in extended precision; the window matrices get badly conditioned
// already at ell = 6 and a double-precision oracle cannot resolve them.
BigFloat cofactor_det(const std::vector<BigFloat>& a, int n) {
    if (n == 1) return a[0];
    BigFloat det = 0;
    for (int c = 0; c < n; ++c) {
        if (a[static_cast<size_t>(c)] == 0) continue;
        std::vector<BigFloat> minor;
        minor.reserve(static_cast<size_t>((n - 1) * (n - 1)));
        for (int r = 1; r < n; ++r)
            for (int cc = 0; cc < n; ++cc)
                if (cc != c) minor.push_back(a[static_cast<size_t>(r * n + cc)]);
        const int sign = c % 2 == 0 ? 1 : -1;
        det += sign * a[static_cast<size_t>(c)] * cofactor_det(minor, n - 1);
    }
    return det;
}

std::vector<BigFloat> lift(const std::vector<double>& a) {
    std::vector<BigFloat> out;
    out.reserve(a.size());
    for (double v : a) out.emplace_back(v);
    return out;
}

}  // namespace

TEST_CASE("build_V examples") {
    const BasisMatrix v1 = build_V(1, CensorWindow(-1.0, 1.0));
    CHECK(v1.at(0, 0) == doctest::Approx(0.6826894921).epsilon(1e-9));

    const BasisMatrix v4 = build_V(4, CensorWindow::symmetric(10.0));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(std::abs(v4.at(r, c) - (r == c ? 1.0 : 0.0)) <= 1e-8);

    const BasisMatrix v2 = build_V(2, CensorWindow(-1.0, 1.0));
    CHECK(v2.at(0, 0) == doctest::Approx(0.682689).epsilon(1e-6));
    CHECK(v2.at(0, 1) == 0.0);
    CHECK(v2.at(1, 0) == 0.0);
    CHECK(v2.at(1, 1) == doctest::Approx(0.198747).epsilon(1e-6));
}

TEST_CASE("build_V parity zeros are exact for symmetric windows") {
    const BasisMatrix V = build_V(7, CensorWindow::symmetric(1.5));
    for (int r = 0; r < 7; ++r)
        for (int c = 0; c < 7; ++c)
            if ((r + c) % 2 == 1) CHECK(V.at(r, c) == 0.0);
}

TEST_CASE("build_V determinant is strictly positive") {
    for (double R : {0.5, 1.0, 2.0})
        for (int ell : {1, 2, 3, 4, 6}) CHECK(determinant(build_V(ell, CensorWindow::symmetric(R))) > 0.0);
}

TEST_CASE("det(V) identity at ell = 2") {
    for (double R : {1.0, 2.0}) {
        const CensorWindow w = CensorWindow::symmetric(R);
        const double lu_det = determinant(build_V(2, w));
        auto f = [](double x0, double x1) {
            const double d = x0 - x1;
            return std::exp(-0.5 * (x0 * x0 + x1 * x1)) * d * d;
        };
        const double oracle = quadrature::integrate_triangle(f, w.lower, w.upper, 1e-11) / (2.0 * M_PI);
        CHECK(lu_det == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("solve_basis near the uncensored limit") {
    const BasisMatrix V = build_V(8, CensorWindow::symmetric(10.0));
    const EstimatorBasis basis = solve_basis(V, 2);
    REQUIRE(basis.betas.size() == 4);
    for (int i = 0; i < 4; ++i)
        for (int a = 0; a < 8; ++a) {
            const double target = a == i ? 1.0 : 0.0;
            CHECK(std::abs(basis.betas[static_cast<size_t>(i)][static_cast<size_t>(a)] - target) <= 1e-7);
        }
}

TEST_CASE("solve_basis on a 2x2 diagonal window matrix") {
    const BasisMatrix V = build_V(2, CensorWindow(-1.0, 1.0));
    const EstimatorBasis basis = solve_basis(V, 1);
    CHECK(basis.betas[1][0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(basis.betas[1][1] == doctest::Approx(5.03152).epsilon(1e-5));
}

TEST_CASE("solve_basis residual contract") {
    for (double R : {1.0, 2.0, 10.0}) {
        const BasisMatrix V = build_V(8, CensorWindow::symmetric(R));
        const EstimatorBasis basis = solve_basis(V, 2);
        for (size_t i = 0; i < basis.betas.size(); ++i) {
            double beta_norm = 0.0;
            for (double b : basis.betas[i]) beta_norm = std::max(beta_norm, std::abs(b));
            CHECK(basis.residual_norms[i] <= 1e-9 * beta_norm);
        }
    }
}

TEST_CASE("solve_basis rejects ell below 2(2k-1)") {
    const BasisMatrix V = build_V(4, CensorWindow::symmetric(1.0));
    CHECK_THROWS_AS(solve_basis(V, 2), ConfigError);
}

TEST_CASE("Cramer consistency at small ell") {
    for (int ell : {2, 4, 6}) {
        const int k = ell >= 6 ? 2 : 1;
        const CensorWindow w = CensorWindow::symmetric(1.0);
        const BasisMatrix V = build_V(ell, w);
        const EstimatorBasis basis = solve_basis(V, k);
        const std::vector<BigFloat> entries = lift(V.entries);
        const BigFloat det_v = cofactor_det(entries, ell);
        // The double entries of V carry rounding of order eps; through the
        // inverse that inflates to roughly cond(V) * eps in beta.
        const double tol = std::max(1e-10, 4.0 * V.condition_estimate * 1e-16);
        for (int i = 0; i < 2 * k; ++i)
            for (int a = 0; a < ell; ++a) {
                // column a replaced with e_i
                std::vector<BigFloat> replaced = entries;
                for (int r = 0; r < ell; ++r)
                    replaced[static_cast<size_t>(r * ell + a)] = r == i ? 1 : 0;
                const double expected =
                    static_cast<double>(cofactor_det(replaced, ell) / det_v);
                const double got = basis.betas[static_cast<size_t>(i)][static_cast<size_t>(a)];
                if (std::abs(expected) > 1e-12)
                    CHECK(got == doctest::Approx(expected).epsilon(tol));
                else
                    CHECK(std::abs(got) <= tol);
            }
    }
}

TEST_CASE("tail_bias vanishes in the uncensored limit") {
    const BasisMatrix V = build_V(6, CensorWindow::symmetric(10.0));
    const EstimatorBasis basis = solve_basis(V, 1);
    const TailBiasReport report = tail_bias(basis, 1.0, 12);
    for (const auto& row : report.rows)
        for (double coeff : row.tail_coeffs) CHECK(std::abs(coeff) <= 1e-7);
}

TEST_CASE("tail_bias shrinks as ell grows") {
    const CensorWindow w(-1.0, 1.0);
    auto bound_at = [&](int ell) {
        const EstimatorBasis basis = solve_basis(build_V(ell, w), 2);
        const TailBiasReport report = tail_bias(basis, 0.9, ell + 30);
        double worst = 0.0;
        for (size_t i = 1; i < report.rows.size(); ++i)
            worst = std::max(worst, report.rows[i].bias_bound);
        return worst;
    };
    CHECK(bound_at(10) < bound_at(6));
}

TEST_CASE("tail_bias single-term case j_max = ell") {
    const CensorWindow w(-1.0, 1.0);
    const EstimatorBasis basis = solve_basis(build_V(6, w), 1);
    const double M = 0.8;
    const TailBiasReport report = tail_bias(basis, M, 6);
    for (const auto& row : report.rows) {
        REQUIRE(row.tail_coeffs.size() == 1);
        CHECK(row.bias_bound ==
              doctest::Approx(std::abs(row.tail_coeffs[0]) * std::pow(M, 6)).epsilon(1e-12));
    }
}

TEST_CASE("tail coefficient ratio diagnostic at ell = 6") {
    const CensorWindow w(-1.0, 1.0);
    const EstimatorBasis basis = solve_basis(build_V(6, w), 2);
    const TailBiasReport report = tail_bias(basis, 1.0, 26);
    for (int i = 0; i <= 3; ++i) {
        const auto& coeffs = report.rows[static_cast<size_t>(i)].tail_coeffs;
        // compare |J_{f_i,ell}| against |J_{f_i,ell+20}| (same parity)
        const double head = std::abs(coeffs.front());
        const double tail = std::abs(coeffs.back());
        CHECK(tail <= 1e-3 * head);
    }
}

TEST_CASE("beta magnitudes stay finite across ell") {
    const CensorWindow w(-1.0, 1.0);
    for (int ell = 2; ell <= 14; ell += 2) {
        const int k = ell >= 6 ? 2 : 1;
        const EstimatorBasis basis = solve_basis(build_V(ell, w), k);
        double max_beta = 0.0;
        for (const auto& beta : basis.betas)
            for (double b : beta) max_beta = std::max(max_beta, std::abs(b));
        CHECK(std::isfinite(max_beta));
        MESSAGE("ell=", ell, " max|beta|=", max_beta);
    }
}

TEST_CASE("default_ell policy") {
    CHECK(default_ell(1, 0.5) == 4);                 // floor 2(2k-1)+2
    CHECK(default_ell(2, 0.2) >= 8);
    CHECK(default_ell(2, 1e-3) == static_cast<int>(std::ceil(6.0 * std::log(1e3))));
}
