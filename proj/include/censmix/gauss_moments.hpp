#pragma once

#include <cmath>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "censmix/hermite.hpp"

namespace censmix {

namespace detail {

template <class Real>
Real erf_of(Real x) {
    return boost::math::erf(x);
}

inline double erf_of(double x) { return std::erf(x); }

template <class Real>
Real factorial_of(int n) {
    Real f = 1;
    for (int t = 2; t <= n; ++t) f *= t;
    return f;
}

template <class Real>
Real to_real(const BigInt& v) {
    return static_cast<Real>(v);
}

template <>
inline double to_real<double>(const BigInt& v) {
    return v.convert_to<double>();
}

}  // namespace detail

// G_n(a,b) = int_a^b x^n exp(-x^2/2) dx for n = 0..n_max, via the stable
// recurrence G_n = (n-1) G_{n-2} + a^{n-1} e^{-a^2/2} - b^{n-1} e^{-b^2/2}
// with G_0 from the Gaussian error integral. Infinite endpoints contribute
// zero boundary terms.
template <class Real>
std::vector<Real> window_moment_table(int n_max, const CensorWindow& w) {
    using std::exp;
    using std::sqrt;
    const Real half = Real(1) / 2;
    const Real root_half = sqrt(half);
    const bool lo_finite = std::isfinite(w.lower);
    const bool hi_finite = std::isfinite(w.upper);

    const Real a = lo_finite ? Real(w.lower) : Real(0);
    const Real b = hi_finite ? Real(w.upper) : Real(0);
    const Real ea = lo_finite ? Real(exp(-half * a * a)) : Real(0);
    const Real eb = hi_finite ? Real(exp(-half * b * b)) : Real(0);

    std::vector<Real> g(static_cast<size_t>(n_max) + 1);
    const Real erf_b = hi_finite ? detail::erf_of(Real(b * root_half)) : Real(1);
    const Real erf_a = lo_finite ? detail::erf_of(Real(a * root_half)) : Real(-1);
    g[0] = sqrt(boost::math::constants::half_pi<Real>()) * (erf_b - erf_a);
    if (n_max >= 1) g[1] = ea - eb;
    // Boundary powers a^{n-1}, b^{n-1} built incrementally.
    Real a_pow = lo_finite ? a : Real(0);
    Real b_pow = hi_finite ? b : Real(0);
    for (int n = 2; n <= n_max; ++n) {
        g[static_cast<size_t>(n)] =
            Real(n - 1) * g[static_cast<size_t>(n - 2)] + a_pow * ea - b_pow * eb;
        a_pow *= a;
        b_pow *= b;
    }
    return g;
}

// Extended-precision J functional:
//   J_{h_c,r} = int_S (1 / (sqrt(2 pi) r!)) e^{-x^2/2} h_c(x) h_r(x) dx.
// The polynomial product is exact; the contraction against the window
// moments runs in extended precision. Odd c+r on a symmetric window is an
// exact zero by parity.
template <class Real>
Real compute_J_t(int c, int r, const CensorWindow& w) {
    using std::sqrt;
    if (c < 0 || r < 0) throw ConfigError("compute_J: indices must be nonnegative");
    if (w.is_symmetric() && (c + r) % 2 != 0) return Real(0);
    const HermitePoly prod = multiply(hermite_coefficients(c), hermite_coefficients(r));
    const std::vector<Real> g = window_moment_table<Real>(prod.degree, w);
    Real acc = 0;
    for (int p = 0; p <= prod.degree; ++p) {
        const BigInt& coef = prod.monomial_coeffs[static_cast<size_t>(p)];
        if (coef == 0) continue;
        acc += detail::to_real<Real>(coef) * g[static_cast<size_t>(p)];
    }
    const Real norm = sqrt(boost::math::constants::two_pi<Real>()) * detail::factorial_of<Real>(r);
    return acc / norm;
}

// Double-precision front ends (computed in extended precision internally).
double window_moment(int n, const CensorWindow& w);
double compute_J(int c, int r, const CensorWindow& w);

}  // namespace censmix
