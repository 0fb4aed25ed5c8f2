#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>

namespace censmix {

// Adaptive Gauss-Kronrod 7-15 integration. Diagnostic / oracle path only;
// the estimation pipeline uses closed-form window moments.
namespace quadrature {

namespace detail {

// Kronrod-15 abscissae (positive half) and weights; Gauss-7 weights embedded.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& result, double& err) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double result_gauss = kWg[3] * fc;
    double result_kronrod = kWgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = f(center - dx) + f(center + dx);
        result_kronrod += kWgk[j] * fsum;
        if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
    }
    result = result_kronrod * half;
    const double diff = (result_kronrod - result_gauss) * half;
    err = std::abs(diff);
}

template <class F>
double adapt(const F& f, double a, double b, double rel_tol, double abs_tol, int depth) {
    double result, err;
    gk15(f, a, b, result, err);
    if (depth >= 50 || err <= abs_tol || err <= rel_tol * std::abs(result)) return result;
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, rel_tol, abs_tol * 0.5, depth + 1) +
           adapt(f, mid, b, rel_tol, abs_tol * 0.5, depth + 1);
}

}  // namespace detail

template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-12,
                 double abs_tol = 1e-300) {
    return detail::adapt(f, a, b, rel_tol, abs_tol, 0);
}

// Integral over the triangle a < x1 < x0 < b of f(x0, x1), by nesting.
template <class F>
double integrate_triangle(const F& f, double a, double b, double rel_tol = 1e-10) {
    auto outer = [&](double x0) {
        auto inner = [&](double x1) { return f(x0, x1); };
        return integrate(inner, a, x0, rel_tol * 0.1);
    };
    return integrate(outer, a, b, rel_tol);
}

}  // namespace quadrature
}  // namespace censmix
