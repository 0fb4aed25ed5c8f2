#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "censmix/pipeline.hpp"
#include "censmix/verify.hpp"

using namespace censmix;

namespace {

MixtureModel make_model(std::vector<double> w, std::vector<double> mu, double sigma,
                        double M) {
    MixtureModel m;
    m.k = static_cast<int>(w.size());
    m.weights = std::move(w);
    m.means = std::move(mu);
    m.sigma = sigma;
    m.mean_bound = M;
    m.validate();
    return m;
}

}  // namespace

TEST_CASE("oracle mode recovers the reference model") {
    ExperimentConfig cfg;
    cfg.k = 2;
    cfg.R = 3.0;
    cfg.M = 3.0;
    cfg.n = 1000;
    cfg.seed = 1;
    cfg.oracle_mode = true;
    cfg.model = make_model({0.3, 0.7}, {-2.0, 1.0}, 1.0, 3.0);
    const SampleBatch batch = sample(*cfg.model, cfg.window(), cfg.n, cfg.seed);
    const PipelineResult res = run_pipeline(cfg, batch);
    const MatchReport match =
        match_parameters(res.weights, res.means, cfg.model->weights, cfg.model->means);
    CHECK(match.max_weight_err <= 1e-6);
    CHECK(match.max_mean_err <= 1e-6);
}

TEST_CASE("pipeline is deterministic") {
    ExperimentConfig cfg;
    cfg.k = 2;
    cfg.ell = 6;
    cfg.R = 2.0;
    cfg.M = 1.5;
    cfg.n = 50000;
    cfg.seed = 77;
    cfg.model = make_model({0.5, 0.5}, {-0.8, 0.8}, 1.0, 1.5);
    const SampleBatch batch = sample(*cfg.model, cfg.window(), cfg.n, cfg.seed);
    const PipelineResult a = run_pipeline(cfg, batch);
    const PipelineResult b = run_pipeline(cfg, batch);
    CHECK(a.weights == b.weights);
    CHECK(a.means == b.means);
    CHECK(a.moment_estimates.values == b.moment_estimates.values);
    CHECK(a.denoised_moments.values == b.denoised_moments.values);
}

TEST_CASE("single component statistical run") {
    ExperimentConfig cfg;
    cfg.k = 1;
    cfg.R = 2.0;
    cfg.M = 1.0;
    cfg.n = 1000000;
    cfg.seed = 3;
    cfg.model = make_model({1.0}, {0.5}, 1.0, 1.0);
    const SampleBatch batch = sample(*cfg.model, cfg.window(), cfg.n, cfg.seed);
    const PipelineResult res = run_pipeline(cfg, batch);
    REQUIRE(res.means.size() == 1);
    CHECK(std::abs(res.means[0] - 0.5) <= 0.05);
    CHECK(res.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.diagnostics.alpha_hat > 0.8);
    CHECK(std::abs(res.diagnostics.m0_hat - 1.0) <= 0.01);
}

TEST_CASE("sigma rescaling returns means in the raw frame") {
    ExperimentConfig cfg;
    cfg.k = 1;
    cfg.R = 4.0;
    cfg.M = 2.0;
    cfg.sigma = 2.0;
    cfg.n = 200000;
    cfg.seed = 5;
    cfg.model = make_model({1.0}, {1.0}, 2.0, 2.0);
    const SampleBatch batch = sample(*cfg.model, cfg.window(), cfg.n, cfg.seed);
    const PipelineResult res = run_pipeline(cfg, batch);
    CHECK(std::abs(res.means[0] - 1.0) <= 0.1);
    CHECK(res.sigma == 2.0);
}

TEST_CASE("match_parameters examples") {
    const MatchReport id = match_parameters({0.3, 0.7}, {-2.0, 1.0}, {0.3, 0.7}, {-2.0, 1.0});
    CHECK(id.max_weight_err == 0.0);
    CHECK(id.max_mean_err == 0.0);

    const MatchReport swap = match_parameters({0.7, 0.3}, {1.0, -2.0}, {0.3, 0.7}, {-2.0, 1.0});
    CHECK(swap.max_weight_err == 0.0);
    CHECK(swap.max_mean_err == 0.0);
    CHECK(swap.permutation == std::vector<int>{1, 0});

    const MatchReport close =
        match_parameters({0.5, 0.5}, {0.9, -1.1}, {0.5, 0.5}, {-1.0, 1.0});
    CHECK(close.permutation == std::vector<int>{1, 0});
    CHECK(close.max_mean_err == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("file round-trip matches the in-process run") {
    ExperimentConfig cfg;
    cfg.k = 2;
    cfg.ell = 6;
    cfg.R = 2.0;
    cfg.M = 1.5;
    cfg.n = 30000;
    cfg.seed = 99;
    cfg.model = make_model({0.4, 0.6}, {-0.7, 0.9}, 1.0, 1.5);
    const SampleBatch batch = sample(*cfg.model, cfg.window(), cfg.n, cfg.seed);

    const std::string path = "/tmp/censmix_pipeline_batch.txt";
    write_batch(path, batch, cfg.R, cfg.sigma);
    const BatchFile loaded = read_batch(path);
    std::remove(path.c_str());

    const PipelineResult direct = run_pipeline(cfg, batch);
    const PipelineResult via_file = run_pipeline(cfg, loaded.batch);
    CHECK(direct.weights == via_file.weights);
    CHECK(direct.means == via_file.means);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    cfg.k = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.k = 2;
    cfg.ell = 4;  // below 2(2k-1)
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.ell.reset();
    cfg.R = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.R = 1.0;
    cfg.epsilon = 0.2;
    CHECK(cfg.delta() == doctest::Approx(std::pow(0.2, 4)).epsilon(1e-15));
}

TEST_CASE("pipeline errors carry stage labels") {
    ExperimentConfig cfg;
    cfg.k = 1;
    cfg.R = 1.0;
    cfg.M = 1.0;
    SampleBatch empty;
    try {
        run_pipeline(cfg, empty);
        FAIL("expected PipelineError");
    } catch (const PipelineError& e) {
        CHECK(std::string(e.what()).find("estimate_moments") != std::string::npos);
    }
}

TEST_CASE("verify_suite fast level passes") {
    const VerifyReport report = verify_suite(VerifyLevel::fast);
    for (const auto& check : report.checks) {
        INFO(check.name, ": ", check.detail);
        CHECK(check.passed);
    }
    CHECK(report.all_passed());
}
