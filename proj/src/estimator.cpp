#include "censmix/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace censmix {
namespace {

constexpr std::int64_t kShardSize = 4096;

// Compensated Horner evaluation of a double-coefficient polynomial.
double horner_compensated(const std::vector<double>& coeffs, double x) {
    double s = coeffs.back();
    double c = 0.0;
    for (int i = static_cast<int>(coeffs.size()) - 2; i >= 0; --i) {
        double p = s * x;
        double pe = std::fma(s, x, -p);
        double t = p + coeffs[static_cast<size_t>(i)];
        double bb = t - p;
        double te = (p - (t - bb)) + (coeffs[static_cast<size_t>(i)] - bb);
        s = t;
        c = std::fma(c, x, pe + te);
    }
    return s + c;
}

// Neumaier summation within a shard.
double shard_sum(const std::vector<double>& coeffs, const std::vector<double>& values,
                 std::int64_t begin, std::int64_t end) {
    double sum = 0.0;
    double comp = 0.0;
    for (std::int64_t s = begin; s < end; ++s) {
        const double v = horner_compensated(coeffs, values[static_cast<size_t>(s)]);
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

// Pairwise reduction of the shard sums; tree shape fixed by shard index.
double pairwise_reduce(std::vector<double> v) {
    if (v.empty()) return 0.0;
    while (v.size() > 1) {
        std::vector<double> next;
        next.reserve((v.size() + 1) / 2);
        for (size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(v[i] + v[i + 1]);
        if (v.size() % 2 == 1) next.push_back(v.back());
        v = std::move(next);
    }
    return v[0];
}

double estimate_with_coeffs(const SampleBatch& batch, const std::vector<double>& coeffs) {
    std::vector<double> shards;
    const std::int64_t n_obs = batch.n_observed();
    shards.reserve(static_cast<size_t>((n_obs + kShardSize - 1) / kShardSize));
    for (std::int64_t begin = 0; begin < n_obs; begin += kShardSize)
        shards.push_back(shard_sum(coeffs, batch.values, begin, std::min(begin + kShardSize, n_obs)));
    return pairwise_reduce(std::move(shards)) / static_cast<double>(batch.n_total);
}

}  // namespace

std::pair<SampleBatch, CensorWindow> standardize(const SampleBatch& batch,
                                                 const CensorWindow& window, double sigma) {
    if (!(sigma > 0)) throw ConfigError("standardize: sigma must be positive");
    if (sigma == 1.0) return {batch, window};
    SampleBatch out = batch;
    for (double& v : out.values) v /= sigma;
    return {std::move(out), CensorWindow(window.lower / sigma, window.upper / sigma)};
}

std::vector<double> collapse_basis_polynomial(const EstimatorBasis& basis, int i) {
    const auto& beta = basis.betas.at(static_cast<size_t>(i));
    std::vector<BigFloat> acc(static_cast<size_t>(basis.ell), BigFloat(0));
    for (int a = 0; a < basis.ell; ++a) {
        if (beta[static_cast<size_t>(a)] == 0.0) continue;
        const HermitePoly h = hermite_coefficients(a);
        for (int p = 0; p <= a; ++p)
            acc[static_cast<size_t>(p)] += BigFloat(beta[static_cast<size_t>(a)]) * BigFloat(h.monomial_coeffs[static_cast<size_t>(p)]);
    }
    std::vector<double> coeffs(acc.size());
    for (size_t p = 0; p < acc.size(); ++p) coeffs[p] = acc[p].convert_to<double>();
    return coeffs;
}

double estimate_moment_component(const SampleBatch& batch, const EstimatorBasis& basis, int i) {
    if (batch.n_total == 0) throw EmptyInputError("estimate_moments: empty batch");
    return estimate_with_coeffs(batch, collapse_basis_polynomial(basis, i));
}

MomentVector estimate_moments(const SampleBatch& batch, const EstimatorBasis& basis) {
    if (batch.n_total == 0) throw EmptyInputError("estimate_moments: empty batch");
    for (double v : batch.values)
        if (!basis.window.contains(v))
            throw ConfigError("estimate_moments: sample value outside the basis window");
    MomentVector out;
    out.order = 2 * basis.k - 1;
    out.frame = Frame::standardized;
    out.values.resize(static_cast<size_t>(out.order));
    for (int i = 1; i <= out.order; ++i) {
        const auto coeffs = collapse_basis_polynomial(basis, i);
        out.values[static_cast<size_t>(i - 1)] = estimate_with_coeffs(batch, coeffs);
    }
    return out;
}

}  // namespace censmix
