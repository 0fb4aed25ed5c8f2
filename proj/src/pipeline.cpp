#include "censmix/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace censmix {
namespace {

template <class Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError(name, e.what());
    }
}

}  // namespace

double ExperimentConfig::delta() const { return std::pow(epsilon, 2.0 * k); }

void ExperimentConfig::validate() const {
    if (k < 1) throw ConfigError("config: k must be >= 1");
    if (!(R > 0)) throw ConfigError("config: R must be positive");
    if (!(M > 0)) throw ConfigError("config: M must be positive");
    if (!(sigma > 0)) throw ConfigError("config: sigma must be positive");
    if (n < 1) throw ConfigError("config: n must be >= 1");
    if (!(epsilon > 0) || !(epsilon < 1)) throw ConfigError("config: epsilon must lie in (0, 1)");
    if (ell && *ell < 2 * (2 * k - 1))
        throw ConfigError("config: ell = " + std::to_string(*ell) + " violates ell >= 2(2k-1) = " +
                          std::to_string(2 * (2 * k - 1)));
    if (model) model->validate();
}

PipelineResult run_pipeline(const ExperimentConfig& config, const SampleBatch& batch) {
    config.validate();
    const int k = config.k;
    const int ell = config.resolved_ell();
    const double m_std = config.M / config.sigma;  // mean bound in the sigma=1 frame

    PipelineResult result;
    result.k = k;
    result.sigma = config.sigma;
    result.seed = batch.seed;
    result.diagnostics.ell = ell;
    result.diagnostics.alpha_hat =
        batch.n_total > 0
            ? static_cast<double>(batch.n_observed()) / static_cast<double>(batch.n_total)
            : 0.0;

    auto [std_batch, std_window] = stage("standardize", [&] {
        return standardize(batch, config.window(), config.sigma);
    });

    const BasisMatrix V = stage("build_V", [&] { return build_V(ell, std_window); });
    result.diagnostics.condition_estimate = V.condition_estimate;

    const EstimatorBasis basis = stage("solve_basis", [&] { return solve_basis(V, k); });
    result.diagnostics.residual_norms = basis.residual_norms;
    result.diagnostics.extended_precision = basis.extended_precision;

    if (config.oracle_mode) {
        if (!config.model)
            throw PipelineError("estimate_moments", "oracle mode requires a ground-truth model");
        result.moment_estimates = stage("estimate_moments", [&] {
            return mixing_moments(*config.model, 2 * k - 1);
        });
        result.diagnostics.m0_hat = 1.0;
    } else {
        result.moment_estimates = stage("estimate_moments", [&] {
            return estimate_moments(std_batch, basis);
        });
        result.diagnostics.m0_hat = stage("estimate_moments", [&] {
            return estimate_moment_component(std_batch, basis, 0);
        });
    }

    const TailBiasReport tails = stage("tail_bias", [&] {
        return tail_bias(basis, m_std, ell + 20);
    });
    for (const auto& row : tails.rows) result.diagnostics.bias_bounds.push_back(row.bias_bound);

    const DenoiseResult den = stage("denoise", [&] {
        return denoise(result.moment_estimates, k, m_std);
    });
    result.denoised_moments = den.projected;
    result.diagnostics.projection = den.projection;
    result.diagnostics.weight_diag = den.weight_diag;

    result.weights = den.weights;
    result.means.resize(den.means.size());
    std::transform(den.means.begin(), den.means.end(), result.means.begin(),
                   [&](double mu) { return mu * config.sigma; });
    return result;
}

MatchReport match_parameters(const std::vector<double>& est_weights,
                             const std::vector<double>& est_means,
                             const std::vector<double>& true_weights,
                             const std::vector<double>& true_means) {
    const int k = static_cast<int>(true_means.size());
    if (static_cast<int>(est_means.size()) != k || est_weights.size() != est_means.size() ||
        true_weights.size() != true_means.size())
        throw ConfigError("match_parameters: estimated and true parameter counts must agree");

    auto score = [&](const std::vector<int>& perm, double& w_err, double& m_err) {
        w_err = 0.0;
        m_err = 0.0;
        for (int i = 0; i < k; ++i) {
            const int j = perm[static_cast<size_t>(i)];
            w_err = std::max(w_err, std::abs(est_weights[static_cast<size_t>(j)] -
                                             true_weights[static_cast<size_t>(i)]));
            m_err = std::max(m_err, std::abs(est_means[static_cast<size_t>(j)] -
                                             true_means[static_cast<size_t>(i)]));
        }
        return std::max(w_err, m_err);
    };

    MatchReport best;
    std::vector<int> perm(static_cast<size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);

    if (k <= 8) {
        double best_score = std::numeric_limits<double>::infinity();
        std::vector<int> trial = perm;
        std::sort(trial.begin(), trial.end());
        do {
            double w_err, m_err;
            const double s = score(trial, w_err, m_err);
            if (s < best_score) {
                best_score = s;
                best.permutation = trial;
                best.max_weight_err = w_err;
                best.max_mean_err = m_err;
            }
        } while (std::next_permutation(trial.begin(), trial.end()));
    } else {
        // Large k: pair components in mean-sorted order.
        std::vector<int> est_order(static_cast<size_t>(k)), true_order(static_cast<size_t>(k));
        std::iota(est_order.begin(), est_order.end(), 0);
        std::iota(true_order.begin(), true_order.end(), 0);
        std::sort(est_order.begin(), est_order.end(), [&](int a, int b) {
            return est_means[static_cast<size_t>(a)] < est_means[static_cast<size_t>(b)];
        });
        std::sort(true_order.begin(), true_order.end(), [&](int a, int b) {
            return true_means[static_cast<size_t>(a)] < true_means[static_cast<size_t>(b)];
        });
        best.permutation.assign(static_cast<size_t>(k), 0);
        for (int r = 0; r < k; ++r)
            best.permutation[static_cast<size_t>(true_order[static_cast<size_t>(r)])] =
                est_order[static_cast<size_t>(r)];
        score(best.permutation, best.max_weight_err, best.max_mean_err);
    }
    return best;
}

}  // namespace censmix
