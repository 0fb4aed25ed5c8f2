#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "censmix/pipeline.hpp"
#include "censmix/verify.hpp"

namespace {

using censmix::ExperimentConfig;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerifyFailed = 3;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_array(const std::vector<double>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt17(v[i]);
    }
    return out + "]";
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw censmix::ConfigError("cannot open config file " + path);
    json doc = json::parse(in);
    if (doc.contains("k")) cfg.k = doc["k"].get<int>();
    if (doc.contains("ell")) cfg.ell = doc["ell"].get<int>();
    if (doc.contains("R")) cfg.R = doc["R"].get<double>();
    if (doc.contains("M")) cfg.M = doc["M"].get<double>();
    if (doc.contains("sigma")) cfg.sigma = doc["sigma"].get<double>();
    if (doc.contains("epsilon")) cfg.epsilon = doc["epsilon"].get<double>();
    if (doc.contains("n")) cfg.n = doc["n"].get<std::int64_t>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("quadrature_tolerance"))
        cfg.quadrature_tolerance = doc["quadrature_tolerance"].get<double>();
    if (doc.contains("output_path")) cfg.output_path = doc["output_path"].get<std::string>();
    if (doc.contains("model")) {
        censmix::MixtureModel m;
        m.weights = doc["model"]["weights"].get<std::vector<double>>();
        m.means = doc["model"]["means"].get<std::vector<double>>();
        m.k = static_cast<int>(m.weights.size());
        m.sigma = cfg.sigma;
        m.mean_bound = cfg.M;
        cfg.model = std::move(m);
    }
}

// Keep model metadata in sync with flag overrides.
void finalize_config(ExperimentConfig& cfg) {
    if (cfg.model) {
        cfg.model->sigma = cfg.sigma;
        cfg.model->mean_bound = cfg.M;
        cfg.model->k = static_cast<int>(cfg.model->weights.size());
        if (cfg.model->k != cfg.k)
            throw censmix::ConfigError("config: model component count disagrees with k");
    }
    cfg.validate();
    if (cfg.model) {
        // Theorem precondition w_min * Delta_min = Omega(epsilon): warn only.
        double w_min = 1.0;
        for (double w : cfg.model->weights) w_min = std::min(w_min, w);
        double d_min = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < cfg.model->means.size(); ++i)
            for (size_t j = i + 1; j < cfg.model->means.size(); ++j)
                d_min = std::min(d_min, std::abs(cfg.model->means[i] - cfg.model->means[j]));
        if (cfg.model->k > 1 && w_min * d_min < cfg.epsilon)
            std::cerr << "warning: w_min * Delta_min = " << w_min * d_min
                      << " is below epsilon = " << cfg.epsilon << "\n";
    }
}

std::string result_json(const censmix::PipelineResult& r) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"weights\": " << json_array(r.weights) << ",\n";
    os << "  \"means\": " << json_array(r.means) << ",\n";
    os << "  \"sigma\": " << fmt17(r.sigma) << ",\n";
    os << "  \"k\": " << r.k << ",\n";
    os << "  \"ell\": " << r.diagnostics.ell << ",\n";
    os << "  \"alpha_hat\": " << fmt17(r.diagnostics.alpha_hat) << ",\n";
    os << "  \"moment_estimates\": " << json_array(r.moment_estimates.values) << ",\n";
    os << "  \"denoised_moments\": " << json_array(r.denoised_moments.values) << ",\n";
    os << "  \"diagnostics\": {\n";
    os << "    \"condition_estimate\": " << fmt17(r.diagnostics.condition_estimate) << ",\n";
    os << "    \"residual_norms\": " << json_array(r.diagnostics.residual_norms) << ",\n";
    os << "    \"bias_bounds\": " << json_array(r.diagnostics.bias_bounds) << ",\n";
    os << "    \"m0_hat\": " << fmt17(r.diagnostics.m0_hat) << ",\n";
    os << "    \"extended_precision\": "
       << (r.diagnostics.extended_precision ? "true" : "false") << ",\n";
    os << "    \"projection_iterations\": " << r.diagnostics.projection.iterations << ",\n";
    os << "    \"projection_moved\": " << fmt17(r.diagnostics.projection.moved_distance) << ",\n";
    os << "    \"weight_clipped_mass\": " << fmt17(r.diagnostics.weight_diag.clipped_mass) << ",\n";
    os << "    \"weight_negative_warning\": "
       << (r.diagnostics.weight_diag.negative_warning ? "true" : "false") << "\n";
    os << "  },\n";
    os << "  \"seed\": " << r.seed << "\n";
    os << "}\n";
    return os.str();
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
    } else {
        std::ofstream out(path);
        if (!out) throw censmix::ConfigError("cannot open output file " + path);
        out << content;
    }
}

int cmd_generate(const ExperimentConfig& cfg, const std::string& out_path) {
    if (!cfg.model) throw censmix::ConfigError("generate: a ground-truth model is required");
    const censmix::SampleBatch batch =
        censmix::sample(*cfg.model, cfg.window(), cfg.n, cfg.seed);
    const std::string path = out_path.empty() ? cfg.output_path : out_path;
    if (path.empty()) throw censmix::ConfigError("generate: --out is required");
    censmix::write_batch(path, batch, cfg.R, cfg.sigma);
    std::cerr << "wrote " << batch.n_observed() << " observed / " << batch.n_total
              << " total draws to " << path << "\n";
    return kExitOk;
}

int cmd_estimate(ExperimentConfig cfg, const std::string& in_path, const std::string& out_path) {
    censmix::SampleBatch batch;
    if (cfg.oracle_mode) {
        if (!cfg.model) throw censmix::ConfigError("estimate --oracle: model is required");
        batch.n_total = 1;  // unused in oracle mode
        batch.seed = cfg.seed;
    } else {
        if (in_path.empty()) throw censmix::ConfigError("estimate: --in is required");
        censmix::BatchFile file = censmix::read_batch(in_path);
        if (std::abs(file.R - cfg.R) > 1e-12 || std::abs(file.sigma - cfg.sigma) > 1e-12) {
            cfg.R = file.R;
            cfg.sigma = file.sigma;
        }
        batch = std::move(file.batch);
        cfg.n = batch.n_total;
    }
    const censmix::PipelineResult result = censmix::run_pipeline(cfg, batch);
    write_or_print(out_path.empty() ? cfg.output_path : out_path, result_json(result));
    return kExitOk;
}

int cmd_sweep(ExperimentConfig cfg, const std::string& ns_csv, const std::string& ells_csv,
              int seeds, const std::string& out_path) {
    if (!cfg.model) throw censmix::ConfigError("sweep: a ground-truth model is required");
    std::vector<std::int64_t> ns;
    std::vector<int> ells;
    {
        std::istringstream s(ns_csv);
        std::string tok;
        while (std::getline(s, tok, ',')) if (!tok.empty()) ns.push_back(std::stoll(tok));
    }
    {
        std::istringstream s(ells_csv);
        std::string tok;
        while (std::getline(s, tok, ',')) if (!tok.empty()) ells.push_back(std::stoi(tok));
    }
    if (ns.empty()) ns.push_back(cfg.n);
    if (ells.empty()) ells.push_back(cfg.resolved_ell());

    std::ostringstream csv;
    csv << "n,ell,seed,max_weight_err,max_mean_err,runtime_ms\n";
    for (std::int64_t n : ns)
        for (int ell : ells)
            for (int s = 0; s < seeds; ++s) {
                ExperimentConfig cell = cfg;
                cell.n = n;
                cell.ell = ell;
                cell.seed = cfg.seed + static_cast<std::uint64_t>(s);
                const auto t0 = std::chrono::steady_clock::now();
                const censmix::SampleBatch batch =
                    censmix::sample(*cell.model, cell.window(), n, cell.seed);
                const censmix::PipelineResult result = censmix::run_pipeline(cell, batch);
                const auto t1 = std::chrono::steady_clock::now();
                const censmix::MatchReport match = censmix::match_parameters(
                    result.weights, result.means, cell.model->weights, cell.model->means);
                const double ms =
                    std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;
                csv << n << "," << ell << "," << cell.seed << "," << fmt17(match.max_weight_err)
                    << "," << fmt17(match.max_mean_err) << "," << fmt17(ms) << "\n";
            }
    write_or_print(out_path.empty() ? cfg.output_path : out_path, csv.str());
    return kExitOk;
}

int cmd_verify(const std::string& level_str) {
    censmix::VerifyLevel level;
    if (level_str == "fast")
        level = censmix::VerifyLevel::fast;
    else if (level_str == "full")
        level = censmix::VerifyLevel::full;
    else
        throw censmix::ConfigError("verify: --level must be fast or full");
    const censmix::VerifyReport report = censmix::verify_suite(level);
    for (const auto& c : report.checks)
        std::cout << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  (" << c.detail << ")\n";
    return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Censored Gaussian mixture estimation (Hermite-basis method of moments)"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_path, in_path, out_path;
    std::string level = "fast";
    std::string sweep_ns, sweep_ells;
    int sweep_seeds = 1;
    int ell_flag = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--n", cfg.n, "number of draws");
        sub->add_option("--k", cfg.k, "number of components");
        sub->add_option("--ell", ell_flag, "basis size (default from k and epsilon)");
        sub->add_option("--R", cfg.R, "window radius; S = [-R, R]");
        sub->add_option("--M", cfg.M, "mean bound");
        sub->add_option("--sigma", cfg.sigma, "known component sigma");
        sub->add_option("--epsilon", cfg.epsilon, "target accuracy");
        sub->add_option("--out", out_path, "output path");
    };

    CLI::App* gen = app.add_subcommand("generate", "sample a censored batch to a file");
    add_common(gen);
    CLI::App* est = app.add_subcommand("estimate", "run the estimation pipeline on a sample file");
    add_common(est);
    est->add_option("--in", in_path, "sample file");
    est->add_flag("--oracle", cfg.oracle_mode, "bypass sampling with exact mixing moments");
    CLI::App* swp = app.add_subcommand("sweep", "sweep n and/or ell, emit CSV");
    add_common(swp);
    swp->add_option("--ns", sweep_ns, "comma-separated n values");
    swp->add_option("--ells", sweep_ells, "comma-separated ell values");
    swp->add_option("--seeds", sweep_seeds, "seeds per cell");
    CLI::App* ver = app.add_subcommand("verify", "run the verification suite");
    ver->add_option("--level", level, "fast|full");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (ver->parsed()) return cmd_verify(level);
        // Flags win over file: parse the file first, then re-apply flags.
        if (!config_path.empty()) {
            ExperimentConfig file_cfg;
            load_config_file(config_path, file_cfg);
            ExperimentConfig flag_cfg = cfg;
            cfg = file_cfg;
            CLI::App* active = gen->parsed() ? gen : (est->parsed() ? est : swp);
            auto overridden = [&](const std::string& name) {
                return active->count(name) > 0;
            };
            if (overridden("--seed")) cfg.seed = flag_cfg.seed;
            if (overridden("--n")) cfg.n = flag_cfg.n;
            if (overridden("--k")) cfg.k = flag_cfg.k;
            if (overridden("--R")) cfg.R = flag_cfg.R;
            if (overridden("--M")) cfg.M = flag_cfg.M;
            if (overridden("--sigma")) cfg.sigma = flag_cfg.sigma;
            if (overridden("--epsilon")) cfg.epsilon = flag_cfg.epsilon;
            cfg.oracle_mode = flag_cfg.oracle_mode;
        }
        if (ell_flag >= 0) cfg.ell = ell_flag;
        finalize_config(cfg);

        if (gen->parsed()) return cmd_generate(cfg, out_path);
        if (est->parsed()) return cmd_estimate(cfg, in_path, out_path);
        if (swp->parsed()) return cmd_sweep(cfg, sweep_ns, sweep_ells, sweep_seeds, out_path);
        return kExitUsage;
    } catch (const censmix::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const censmix::PipelineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const censmix::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
