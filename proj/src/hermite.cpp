#include "censmix/hermite.hpp"

#include <cmath>

namespace censmix {
namespace {

// Error-free transformations for double-double accumulation.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline DD dd_add(DD a, double b) {
    DD s = two_sum(a.hi, b);
    s.lo += a.lo;
    DD r = two_sum(s.hi, s.lo);
    return r;
}

inline DD dd_mul(DD a, double b) {
    DD p = two_prod(a.hi, b);
    p.lo = std::fma(a.lo, b, p.lo);
    DD r = two_sum(p.hi, p.lo);
    return r;
}

// Split an exact integer into a hi+lo pair of doubles (exact for |v| < 2^106).
DD split_bigint(const BigInt& v) {
    double hi = v.convert_to<double>();
    BigFloat rem = BigFloat(v) - BigFloat(hi);
    double lo = rem.convert_to<double>();
    return {hi, lo};
}

}  // namespace

HermitePoly hermite_coefficients(int j) {
    if (j < 0) throw ConfigError("hermite_coefficients: degree must be nonnegative");
    if (j > kMaxHermiteDegree)
        throw CapacityError("hermite_coefficients: degree " + std::to_string(j) +
                            " exceeds maximum " + std::to_string(kMaxHermiteDegree));
    HermitePoly p;
    p.degree = j;
    p.monomial_coeffs.assign(static_cast<size_t>(j) + 1, BigInt(0));
    // h_j(x) = j! sum_i (-1/2)^i / (i! (j-2i)!) x^{j-2i}; each term is an
    // exact integer: j! / (2^i i! (j-2i)!) is integral.
    BigInt j_fact = 1;
    for (int t = 2; t <= j; ++t) j_fact *= t;
    BigInt i_fact = 1;
    BigInt pow2 = 1;
    for (int i = 0; 2 * i <= j; ++i) {
        if (i > 0) {
            i_fact *= i;
            pow2 *= 2;
        }
        BigInt m_fact = 1;
        for (int t = 2; t <= j - 2 * i; ++t) m_fact *= t;
        BigInt coeff = j_fact / (pow2 * i_fact * m_fact);
        if (i % 2 != 0) coeff = -coeff;
        p.monomial_coeffs[static_cast<size_t>(j - 2 * i)] = coeff;
    }
    return p;
}

HermitePoly multiply(const HermitePoly& p, const HermitePoly& q) {
    HermitePoly r;
    r.degree = p.degree + q.degree;
    r.monomial_coeffs.assign(static_cast<size_t>(r.degree) + 1, BigInt(0));
    for (size_t i = 0; i < p.monomial_coeffs.size(); ++i) {
        if (p.monomial_coeffs[i] == 0) continue;
        for (size_t j = 0; j < q.monomial_coeffs.size(); ++j) {
            r.monomial_coeffs[i + j] += p.monomial_coeffs[i] * q.monomial_coeffs[j];
        }
    }
    return r;
}

double hermite_eval(const HermitePoly& p, double x) {
    // Horner in double-double; coefficients split exactly.
    DD acc = split_bigint(p.monomial_coeffs.back());
    for (int i = p.degree - 1; i >= 0; --i) {
        acc = dd_mul(acc, x);
        DD c = split_bigint(p.monomial_coeffs[static_cast<size_t>(i)]);
        acc = dd_add(acc, c.hi);
        acc = dd_add(acc, c.lo);
    }
    return acc.hi + acc.lo;
}

double hermite_recurrence_eval(int j, double x) {
    if (j == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int t = 1; t < j; ++t) {
        double next = x * cur - static_cast<double>(t) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace censmix
