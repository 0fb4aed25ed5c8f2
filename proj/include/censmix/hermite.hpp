#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "censmix/errors.hpp"

namespace censmix {

using BigInt = boost::multiprecision::cpp_int;
// Extended-precision float (~166 bits of mantissa) for the integral kernels.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline constexpr int kMaxHermiteDegree = 200;

// Probabilist's Hermite polynomial h_j in exact monomial coefficients.
// Coefficients alternate parity with the degree, leading coefficient is 1.
struct HermitePoly {
    int degree = 0;
    std::vector<BigInt> monomial_coeffs;  // index = power, length degree+1
};

// Observation window S = [lower, upper]; draws outside it are censored.
struct CensorWindow {
    double lower;
    double upper;

    CensorWindow(double lo, double hi) : lower(lo), upper(hi) {
        if (!(lower < upper)) throw ConfigError("CensorWindow: lower must be < upper");
    }

    static CensorWindow symmetric(double radius) { return CensorWindow(-radius, radius); }

    bool is_symmetric() const { return lower == -upper; }
    bool contains(double x) const { return x >= lower && x <= upper; }
};

// Exact coefficients of h_j from the factorial expansion; agrees with the
// three-term recurrence h_{j+1} = x h_j - j h_{j-1}.
HermitePoly hermite_coefficients(int j);

// Exact product of two polynomials.
HermitePoly multiply(const HermitePoly& p, const HermitePoly& q);

// Compensated (double-double Horner) evaluation.
double hermite_eval(const HermitePoly& p, double x);

// Reference evaluation of the pure h_j via the three-term recurrence.
double hermite_recurrence_eval(int j, double x);

}  // namespace censmix
