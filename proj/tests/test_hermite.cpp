#include <doctest.h>

#include <cmath>
#include <random>

#include "censmix/gauss_moments.hpp"
#include "censmix/hermite.hpp"
#include "censmix/quadrature.hpp"

using namespace censmix;

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int t = 2; t <= n; ++t) f *= t;
    return f;
}

// Quadrature oracle for the J functional.
double oracle_J(int c, int r, const CensorWindow& w) {
    const HermitePoly hc = hermite_coefficients(c);
    const HermitePoly hr = hermite_coefficients(r);
    auto f = [&](double x) {
        return std::exp(-0.5 * x * x) * hermite_eval(hc, x) * hermite_eval(hr, x) /
               (std::sqrt(2.0 * M_PI) * factorial(r));
    };
    return quadrature::integrate(f, w.lower, w.upper, 1e-13);
}

// Coefficients of h_j via the three-term recurrence, independent of the
// factorial-formula path.
std::vector<BigInt> recurrence_coeffs(int j) {
    std::vector<BigInt> prev{1};          // h_0
    if (j == 0) return prev;
    std::vector<BigInt> cur{0, 1};        // h_1
    for (int t = 1; t < j; ++t) {
        std::vector<BigInt> next(cur.size() + 1, BigInt(0));
        for (size_t p = 0; p < cur.size(); ++p) next[p + 1] += cur[p];       // x * h_t
        for (size_t p = 0; p < prev.size(); ++p) next[p] -= BigInt(t) * prev[p];  // - t * h_{t-1}
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

}  // namespace

TEST_CASE("hermite coefficients match known expansions") {
    const HermitePoly h3 = hermite_coefficients(3);
    REQUIRE(h3.degree == 3);
    CHECK(h3.monomial_coeffs[0] == 0);
    CHECK(h3.monomial_coeffs[1] == -3);
    CHECK(h3.monomial_coeffs[2] == 0);
    CHECK(h3.monomial_coeffs[3] == 1);

    const HermitePoly h0 = hermite_coefficients(0);
    REQUIRE(h0.degree == 0);
    CHECK(h0.monomial_coeffs[0] == 1);

    // h_10 = x^10 - 45 x^8 + 630 x^6 - 3150 x^4 + 4725 x^2 - 945
    const HermitePoly h10 = hermite_coefficients(10);
    CHECK(h10.monomial_coeffs[0] == -945);
    CHECK(h10.monomial_coeffs[2] == 4725);
    CHECK(h10.monomial_coeffs[4] == -3150);
    CHECK(h10.monomial_coeffs[6] == 630);
    CHECK(h10.monomial_coeffs[8] == -45);
    CHECK(h10.monomial_coeffs[10] == 1);
}

TEST_CASE("hermite coefficient invariants") {
    for (int j = 0; j <= 50; ++j) {
        const HermitePoly h = hermite_coefficients(j);
        CHECK(h.monomial_coeffs.back() == 1);  // monic
        for (int p = 0; p <= j; ++p) {
            if ((p % 2) != (j % 2)) CHECK(h.monomial_coeffs[static_cast<size_t>(p)] == 0);
        }
        const auto rec = recurrence_coeffs(j);
        REQUIRE(rec.size() == h.monomial_coeffs.size());
        for (size_t p = 0; p < rec.size(); ++p) CHECK(rec[p] == h.monomial_coeffs[p]);
    }
}

TEST_CASE("hermite degree capacity error") {
    CHECK_THROWS_AS(hermite_coefficients(kMaxHermiteDegree + 1), CapacityError);
    CHECK_THROWS_AS(hermite_coefficients(-1), ConfigError);
}

TEST_CASE("hermite_eval examples") {
    CHECK(hermite_eval(hermite_coefficients(3), 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(hermite_eval(hermite_coefficients(0), 5.0) == 1.0);
    CHECK(hermite_eval(hermite_coefficients(6), 1.0) == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("hermite_eval agrees with recurrence evaluation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(-20.0, 20.0);
    for (int j = 0; j <= 50; j += 2) {
        const HermitePoly h = hermite_coefficients(j);
        for (int trial = 0; trial < 20; ++trial) {
            const double x = xs(rng);
            const double a = hermite_eval(h, x);
            const double b = hermite_recurrence_eval(j, x);
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
        }
    }
}

TEST_CASE("window_moment examples") {
    CHECK(window_moment(1, CensorWindow::symmetric(2.5)) == 0.0);

    // n = 0 on [-1,1]: sqrt(2 pi) (2 Phi(1) - 1)
    const double g0 = window_moment(0, CensorWindow(-1.0, 1.0));
    const double expected0 = std::sqrt(2.0 * M_PI) * (std::erf(1.0 / std::sqrt(2.0)));
    CHECK(g0 == doctest::Approx(expected0).epsilon(1e-14));
    CHECK(g0 == doctest::Approx(1.7112487838).epsilon(1e-8));

    // n = 2 on [-1,1]: one recurrence step G_2 = G_0 - 2 e^{-1/2}
    const double g2 = window_moment(2, CensorWindow(-1.0, 1.0));
    CHECK(g2 == doctest::Approx(g0 - 2.0 * std::exp(-0.5)).epsilon(1e-13));
    CHECK(g2 == doctest::Approx(0.498184).epsilon(1e-5));
}

TEST_CASE("window_moment agrees with quadrature") {
    for (double R : {0.5, 1.0, 3.0}) {
        const CensorWindow w(-R, R + 0.25);  // asymmetric on purpose
        for (int n = 0; n <= 24; ++n) {
            auto f = [&](double x) { return std::pow(x, n) * std::exp(-0.5 * x * x); };
            const double oracle = quadrature::integrate(f, w.lower, w.upper, 1e-13);
            CHECK(window_moment(n, w) == doctest::Approx(oracle).epsilon(1e-10));
        }
    }
}

TEST_CASE("compute_J examples") {
    CHECK(compute_J(1, 1, CensorWindow(-1.0, 1.0)) == doctest::Approx(0.198747).epsilon(1e-5));
    CHECK(compute_J(0, 1, CensorWindow::symmetric(1.7)) == 0.0);
    for (int a = 0; a <= 10; ++a)
        CHECK(compute_J(a, a, CensorWindow::symmetric(10.0)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("parity: odd c+r on symmetric windows is an exact zero") {
    for (double R : {0.5, 1.0, 4.0})
        for (int c = 0; c <= 9; ++c)
            for (int r = 0; r <= 9; ++r)
                if ((c + r) % 2 == 1) CHECK(compute_J(c, r, CensorWindow::symmetric(R)) == 0.0);
}

TEST_CASE("oracle equivalence for compute_J") {
    for (double R : {0.5, 1.0, 2.0, 4.0}) {
        const CensorWindow w = CensorWindow::symmetric(R);
        for (int c = 0; c <= 12; ++c)
            for (int r = 0; r <= 12; ++r) {
                const double closed = compute_J(c, r, w);
                const double oracle = oracle_J(c, r, w);
                const double scale = std::max({std::abs(closed), std::abs(oracle), 1e-30});
                CHECK(std::abs(closed - oracle) / scale <= 1e-9);
            }
    }
}

TEST_CASE("orthogonality limit at R = 10") {
    const CensorWindow w = CensorWindow::symmetric(10.0);
    for (int c = 0; c <= 10; ++c)
        for (int r = 0; r <= 10; ++r) {
            const double target = c == r ? 1.0 : 0.0;
            CHECK(std::abs(compute_J(c, r, w) - target) <= 1e-8);
        }
}

TEST_CASE("window constructor rejects empty intervals") {
    CHECK_THROWS_AS(CensorWindow(1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(CensorWindow(2.0, -2.0), ConfigError);
}
