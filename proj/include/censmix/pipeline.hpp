#pragma once

#include <optional>
#include <string>

#include "censmix/basis.hpp"
#include "censmix/denoise.hpp"
#include "censmix/estimator.hpp"
#include "censmix/model.hpp"

namespace censmix {

struct ExperimentConfig {
    int k = 1;
    std::optional<int> ell;  // default: default_ell(k, epsilon)
    double R = 1.0;
    double M = 1.0;
    double sigma = 1.0;
    double epsilon = 0.2;
    std::int64_t n = 10000;
    std::uint64_t seed = 0;
    std::optional<MixtureModel> model;  // ground truth, when known
    double quadrature_tolerance = 1e-10;
    std::string output_path;
    bool oracle_mode = false;  // substitute exact mixing moments for m_hat

    int resolved_ell() const { return ell ? *ell : default_ell(k, epsilon); }
    CensorWindow window() const { return CensorWindow::symmetric(R); }
    // Internal moment accuracy target delta = epsilon^{2k}.
    double delta() const;
    void validate() const;
};

struct PipelineDiagnostics {
    int ell = 0;
    double condition_estimate = 0.0;
    std::vector<double> residual_norms;
    std::vector<double> bias_bounds;  // per i = 0..2k-1 (truncated majorant)
    double alpha_hat = 0.0;           // n' / n
    double m0_hat = 0.0;              // i = 0 diagnostic, expected ~1
    bool extended_precision = false;
    ProjectionDiagnostics projection;
    WeightDiagnostics weight_diag;
};

struct PipelineResult {
    std::vector<double> weights;
    std::vector<double> means;  // original (sigma) frame
    double sigma = 1.0;
    int k = 0;
    std::uint64_t seed = 0;
    MomentVector moment_estimates;   // standardized frame
    MomentVector denoised_moments;   // standardized frame
    PipelineDiagnostics diagnostics;
};

// Algorithm 1 end to end: standardize -> basis -> moment estimates ->
// denoised method of moments -> rescale.
PipelineResult run_pipeline(const ExperimentConfig& config, const SampleBatch& batch);

struct MatchReport {
    std::vector<int> permutation;  // estimated index for each truth index
    double max_weight_err = 0.0;
    double max_mean_err = 0.0;
};

// Best permutation under max(weight error, mean error); exhaustive for
// k <= 8, sorted-means pairing beyond.
MatchReport match_parameters(const std::vector<double>& est_weights,
                             const std::vector<double>& est_means,
                             const std::vector<double>& true_weights,
                             const std::vector<double>& true_means);

}  // namespace censmix
