// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tensorpca/config_io.hpp"

namespace tpca {

struct ExperimentConfig {
    StreamConfig stream;  // template; seed is re-derived per trial
    std::string method;   // nsga | nsga_odd | sga | sga_projected | sga_accelerated
    json method_config = json::object();
    long trials = 1;
    std::uint64_t master_seed = 0;
    std::vector<long> sample_grid;
    std::filesystem::path output_dir;
    double success_threshold = 0.1;

    void validate() const;
};

ExperimentConfig experiment_config_from_json(const json& j);
json experiment_config_to_json(const ExperimentConfig& c);

struct AggregateRow {
    long num_samples = 0;
    std::string method;
    double mean_error = 0.0;
    double median_error = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double success_rate = 0.0;
};

struct TrialOutcome {
    long num_samples = 0;
    long trial = 0;
    std::uint64_t seed = 0;
    double error = 0.0;
    long samples_used = 0;
};

struct RunSummary {
    std::vector<AggregateRow> rows;
    std::vector<TrialOutcome> trials;
    std::vector<std::string> cell_errors;        // budget violations etc., one per cell
    std::vector<std::filesystem::path> outputs;  // every file written
};

/// Runs trials x sample_grid, writes one RecoveryResult JSON per trial plus
/// an aggregate CSV `N,method,mean_error,median_error,q25,q75,success_rate`.
/// Trial seed rule: derive_seed(master_seed, {kSeedTagTrial, N, trial}).
/// SPIKED_TENSOR_THREADS overrides the worker count (default 1).
RunSummary run_trials(const ExperimentConfig& cfg);

/// Runs one trial (sample_grid.front(), trial 0) and writes the full RunTrace
/// CSV to out_path (default: output_dir/trace_<method>_N<N>.csv).
std::filesystem::path run_trace(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_path = {});

struct SweepConfig {
    int k = 4;
    std::vector<int> d_grid;
    std::vector<double> lambda_grid;
    std::vector<long> n_grid;
    NoiseModel noise;
    std::string method = "nsga";
    json method_config = json::object();
    long trials = 1;
    std::uint64_t master_seed = 0;
    double success_threshold = 0.1;
    std::filesystem::path output_dir;

    void validate() const;
};

SweepConfig sweep_config_from_json(const json& j);

struct SweepRow {
    int d = 0;
    double lambda = 0.0;
    long num_samples = 0;
    int k = 0;
    double success_rate = 0.0;
};

struct SweepSummary {
    std::vector<SweepRow> rows;
    std::vector<std::string> cell_errors;
    std::vector<std::filesystem::path> outputs;
};

/// Phase-diagram sweep over (d, lambda, N); writes `d,lambda,N,k,success_rate`.
/// Cell seed rule: derive_seed(master_seed, {kSeedTagTrial, d, lambda_index,
/// N, trial}).
SweepSummary run_sweep(const SweepConfig& cfg);

/// Worker count: SPIKED_TENSOR_THREADS if set and valid, else 1.
int worker_count();

}  // namespace tpca
