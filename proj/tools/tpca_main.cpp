// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "tensorpca/diagnostics.hpp"
#include "tensorpca/harness.hpp"

namespace {

using tpca::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

void print_report_table(const std::vector<tpca::CheckReport>& reports) {
    std::printf("%-36s %10s %12s %12s %8s  %s\n", "check", "trials", "max_abs", "max_rel",
                "tol", "result");
    for (const tpca::CheckReport& r : reports)
        std::printf("%-36s %10ld %12.4e %12.4e %8.3g  %s\n", r.name.c_str(), r.trials,
                    r.max_abs_error, r.max_rel_error, r.tolerance,
                    r.pass ? "PASS" : "FAIL");
}

json report_to_json(const tpca::CheckReport& r) {
    return json{{"name", r.name},
                {"max_abs_error", r.max_abs_error},
                {"max_rel_error", r.max_rel_error},
                {"trials", r.trials},
                {"pass", r.pass},
                {"tolerance", r.tolerance}};
}

void write_reports(const std::string& path, const std::vector<tpca::CheckReport>& reports) {
    if (path.empty()) return;
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    std::ofstream out(path, std::ios::trunc);
    out << arr.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write " + path);
    std::cout << path << "\n";
}

struct SeedOverride {
    std::uint64_t value = 0;
    bool set = false;
};

void add_seed_option(CLI::App* cmd, SeedOverride& seed) {
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&seed](std::uint64_t s) {
            seed.value = s;
            seed.set = true;
        },
        "override the config seed");
}

int run_command(const std::string& config_path, const SeedOverride& seed) {
    tpca::ExperimentConfig cfg = tpca::experiment_config_from_json(load_json_file(config_path));
    if (seed.set) cfg.master_seed = seed.value;
    tpca::RunSummary summary = tpca::run_trials(cfg);
    for (const auto& e : summary.cell_errors) std::cerr << "cell skipped: " << e << "\n";
    for (const auto& p : summary.outputs) std::cout << p.string() << "\n";
    return 0;
}

int sweep_command(const std::string& config_path, const SeedOverride& seed) {
    tpca::SweepConfig cfg = tpca::sweep_config_from_json(load_json_file(config_path));
    if (seed.set) cfg.master_seed = seed.value;
    tpca::SweepSummary summary = tpca::run_sweep(cfg);
    for (const auto& e : summary.cell_errors) std::cerr << "cell skipped: " << e << "\n";
    for (const auto& p : summary.outputs) std::cout << p.string() << "\n";
    return 0;
}

int trace_command(const std::string& config_path, const SeedOverride& seed,
                  const std::string& out_path) {
    tpca::ExperimentConfig cfg = tpca::experiment_config_from_json(load_json_file(config_path));
    if (seed.set) cfg.master_seed = seed.value;
    const auto path = tpca::run_trace(cfg, out_path);
    std::cout << path.string() << "\n";
    return 0;
}

int check_grad_command(int d, int k, int trials, std::uint64_t seed,
                       const std::string& json_path) {
    std::vector<tpca::CheckReport> reports;
    reports.push_back(tpca::gradient_check_suite(d, k, trials, seed));
    print_report_table(reports);
    write_reports(json_path, reports);
    return reports[0].pass ? 0 : 1;
}

int validate_noise_command(const std::string& config_path, const SeedOverride& seed,
                           const std::string& json_path) {
    json j = load_json_file(config_path);
    const int d = j.at("d").get<int>();
    const int k = j.at("k").get<int>();
    const long n_samples = j.value("n_samples", 100000L);
    const int directions = j.value("directions", 10);
    std::uint64_t check_seed = j.value("seed", std::uint64_t{0});
    if (seed.set) check_seed = seed.value;

    std::vector<tpca::NoiseModel> models;
    if (j.contains("noise")) {
        models.push_back(tpca::noise_model_from_json(j.at("noise")));
    } else {
        const double sigma = j.value("sigma", 1.0);
        models.push_back({tpca::NoiseKind::GaussianIID, sigma});
        models.push_back({tpca::NoiseKind::RademacherIID, sigma});
        models.push_back({tpca::NoiseKind::UniformIID, sigma});
    }

    std::vector<tpca::CheckReport> reports;
    for (const tpca::NoiseModel& m : models) {
        reports.push_back(tpca::noise_moment_check(m, d, k, n_samples, directions, check_seed));
        reports.push_back(tpca::subgaussian_tail_check(m, d, k, n_samples, check_seed));
    }
    bool all_pass = true;
    for (const auto& r : reports) all_pass = all_pass && r.pass;
    print_report_table(reports);
    write_reports(json_path, reports);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spiked tensor PCA experiments"};
    app.require_subcommand(1);

    SeedOverride seed;

    std::string run_config;
    auto* run = app.add_subcommand("run", "multi-trial error-vs-N experiment from a JSON config");
    run->add_option("--config", run_config, "experiment config JSON")->required();
    add_seed_option(run, seed);

    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "phase-diagram sweep over (d, lambda, N)");
    sweep->add_option("--config", sweep_config, "sweep config JSON")->required();
    add_seed_option(sweep, seed);

    std::string trace_config;
    std::string trace_out;
    auto* trace = app.add_subcommand("trace", "single seeded trial emitting the full RunTrace CSV");
    trace->add_option("--config", trace_config, "experiment config JSON")->required();
    trace->add_option("--out", trace_out, "output CSV path (default under output_dir)");
    add_seed_option(trace, seed);

    int cg_d = 3;
    int cg_k = 4;
    int cg_trials = 20;
    std::uint64_t cg_seed = 7;
    std::string cg_json;
    auto* check = app.add_subcommand("check-grad", "finite-difference check of the reward gradient");
    check->add_option("--d", cg_d, "dimension")->required();
    check->add_option("--k", cg_k, "tensor order (even)")->required();
    check->add_option("--trials", cg_trials, "random cases");
    check->add_option("--seed", cg_seed, "rng seed for the suite");
    check->add_option("--json", cg_json, "also write the reports as JSON");

    std::string vn_config;
    std::string vn_json;
    auto* validate =
        app.add_subcommand("validate-noise", "noise moment and sub-Gaussian tail checks");
    validate->add_option("--config", vn_config, "noise check config JSON")->required();
    validate->add_option("--json", vn_json, "also write the reports as JSON");
    add_seed_option(validate, seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*run) return run_command(run_config, seed);
        if (*sweep) return sweep_command(sweep_config, seed);
        if (*trace) return trace_command(trace_config, seed, trace_out);
        if (*check) return check_grad_command(cg_d, cg_k, cg_trials, cg_seed, cg_json);
        if (*validate) return validate_noise_command(vn_config, seed, vn_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
