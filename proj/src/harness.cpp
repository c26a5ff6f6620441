// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

namespace tpca {

namespace {

const char* kMethods[] = {"nsga", "nsga_odd", "sga", "sga_projected", "sga_accelerated"};

bool known_method(const std::string& m) {
    for (const char* name : kMethods)
        if (m == name) return true;
    return false;
}

RecoveryResult dispatch_method(const std::string& method, ObservationStream& stream,
                               const json& method_config, long num_samples) {
    if (method == "nsga")
        return nsga_even(stream, nsga_config_from_json(method_config, num_samples));
    if (method == "nsga_odd")
        return nsga_odd(stream, nsga_config_from_json(method_config, num_samples));
    const VectorSgaConfig cfg = vector_sga_config_from_json(method_config, num_samples);
    if (method == "sga") return sga_vector(stream, cfg);
    if (method == "sga_projected") return sga_projected(stream, cfg);
    if (method == "sga_accelerated") return sga_accelerated(stream, cfg);
    throw std::invalid_argument("unknown method: " + method);
}

// Quantile with linear interpolation between order statistics (values sorted).
double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (sorted.size() == 1) return sorted[0];
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void run_jobs(long n_jobs, const std::function<void(long)>& body) {
    const int workers = std::min<long>(worker_count(), n_jobs);
    if (workers <= 1) {
        for (long i = 0; i < n_jobs; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= n_jobs) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

int worker_count() {
    const char* env = std::getenv("SPIKED_TENSOR_THREADS");
    if (env == nullptr) return 1;
    const int n = std::atoi(env);
    return n >= 1 ? n : 1;
}

void ExperimentConfig::validate() const {
    if (!known_method(method)) throw std::invalid_argument("unknown method: " + method);
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (sample_grid.empty()) throw std::invalid_argument("sample_grid must be non-empty");
    for (std::size_t i = 0; i + 1 < sample_grid.size(); ++i)
        if (sample_grid[i] >= sample_grid[i + 1])
            throw std::invalid_argument("sample_grid must be strictly increasing");
    for (long n : sample_grid)
        if (n < 0) throw std::invalid_argument("sample_grid entries must be >= 0");
    if (output_dir.empty()) throw std::invalid_argument("output_dir must be set");
    if (!(success_threshold > 0.0))
        throw std::invalid_argument("success_threshold must be > 0");
}

ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig c;
    if (!j.contains("stream")) throw std::invalid_argument("experiment config: missing 'stream'");
    c.stream = stream_config_from_json(j.at("stream"));
    if (!j.contains("method")) throw std::invalid_argument("experiment config: missing 'method'");
    c.method = j.at("method").get<std::string>();
    if (j.contains("method_config")) c.method_config = j.at("method_config");
    if (j.contains("trials")) c.trials = j.at("trials").get<long>();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("sample_grid")) c.sample_grid = j.at("sample_grid").get<std::vector<long>>();
    if (j.contains("output_dir"))
        c.output_dir = std::filesystem::path(j.at("output_dir").get<std::string>());
    if (j.contains("success_threshold"))
        c.success_threshold = j.at("success_threshold").get<double>();
    return c;
}

json experiment_config_to_json(const ExperimentConfig& c) {
    return json{{"stream", stream_config_to_json(c.stream)},
                {"method", c.method},
                {"method_config", c.method_config},
                {"trials", c.trials},
                {"master_seed", c.master_seed},
                {"sample_grid", c.sample_grid},
                {"output_dir", c.output_dir.string()},
                {"success_threshold", c.success_threshold}};
}

RunSummary run_trials(const ExperimentConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.output_dir);

    struct Job {
        long num_samples;
        long trial;
    };
    std::vector<Job> jobs;
    for (long n : cfg.sample_grid)
        for (long trial = 0; trial < cfg.trials; ++trial) jobs.push_back({n, trial});

    std::vector<std::optional<TrialOutcome>> outcomes(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::vector<std::filesystem::path> files(jobs.size());

    run_jobs(static_cast<long>(jobs.size()), [&](long idx) {
        const Job& job = jobs[static_cast<std::size_t>(idx)];
        StreamConfig sc = cfg.stream;
        sc.seed = derive_seed(cfg.master_seed,
                              {kSeedTagTrial, static_cast<std::uint64_t>(job.num_samples),
                               static_cast<std::uint64_t>(job.trial)});
        try {
            ObservationStream stream(sc);
            RecoveryResult res =
                dispatch_method(cfg.method, stream, cfg.method_config, job.num_samples);

            json out = recovery_result_to_json(res);
            out["method"] = cfg.method;
            out["N"] = job.num_samples;
            out["trial"] = job.trial;
            out["config"] = json{{"stream", stream_config_to_json(sc)},
                                 {"method", cfg.method},
                                 {"method_config", cfg.method_config},
                                 {"master_seed", cfg.master_seed}};
            const std::filesystem::path path =
                cfg.output_dir / ("result_" + cfg.method + "_N" + std::to_string(job.num_samples) +
                                  "_trial" + std::to_string(job.trial) + ".json");
            std::ofstream f(path, std::ios::trunc);
            f << out.dump(2) << "\n";
            if (!f) throw std::runtime_error("cannot write " + path.string());

            outcomes[static_cast<std::size_t>(idx)] =
                TrialOutcome{job.num_samples, job.trial, sc.seed, res.error, res.samples_used};
            files[static_cast<std::size_t>(idx)] = path;
        } catch (const BudgetExceededError& e) {
            errors[static_cast<std::size_t>(idx)] =
                "N=" + std::to_string(job.num_samples) + " trial=" + std::to_string(job.trial) +
                ": " + e.what();
        }
    });

    RunSummary summary;
    for (const auto& f : files)
        if (!f.empty()) summary.outputs.push_back(f);
    for (const auto& e : errors)
        if (!e.empty()) summary.cell_errors.push_back(e);
    for (const auto& o : outcomes)
        if (o) summary.trials.push_back(*o);

    for (long n : cfg.sample_grid) {
        std::vector<double> errs;
        for (const TrialOutcome& t : summary.trials)
            if (t.num_samples == n) errs.push_back(t.error);
        if (errs.empty()) continue;  // whole cell failed (reported above)
        std::sort(errs.begin(), errs.end());
        AggregateRow row;
        row.num_samples = n;
        row.method = cfg.method;
        double sum = 0.0;
        long hits = 0;
        for (double e : errs) {
            sum += e;
            if (e <= cfg.success_threshold) ++hits;
        }
        row.mean_error = sum / static_cast<double>(errs.size());
        row.median_error = quantile(errs, 0.5);
        row.q25 = quantile(errs, 0.25);
        row.q75 = quantile(errs, 0.75);
        row.success_rate = static_cast<double>(hits) / static_cast<double>(errs.size());
        summary.rows.push_back(row);
    }

    const std::filesystem::path agg_path = cfg.output_dir / ("aggregate_" + cfg.method + ".csv");
    std::ofstream agg(agg_path, std::ios::trunc);
    agg << "N,method,mean_error,median_error,q25,q75,success_rate\n";
    for (const AggregateRow& r : summary.rows)
        agg << r.num_samples << ',' << r.method << ',' << fmt_double(r.mean_error) << ','
            << fmt_double(r.median_error) << ',' << fmt_double(r.q25) << ','
            << fmt_double(r.q75) << ',' << fmt_double(r.success_rate) << "\n";
    if (!agg) throw std::runtime_error("cannot write " + agg_path.string());
    summary.outputs.push_back(agg_path);
    return summary;
}

std::filesystem::path run_trace(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_path) {
    cfg.validate();
    const long n = cfg.sample_grid.front();
    StreamConfig sc = cfg.stream;
    sc.seed = derive_seed(cfg.master_seed, {kSeedTagTrial, static_cast<std::uint64_t>(n), 0});
    ObservationStream stream(sc);
    RecoveryResult res = dispatch_method(cfg.method, stream, cfg.method_config, n);

    std::filesystem::path path = out_path;
    if (path.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        path = cfg.output_dir / ("trace_" + cfg.method + "_N" + std::to_string(n) + ".csv");
    } else if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::trunc);
    res.trace.write_csv(f);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return path;
}

void SweepConfig::validate() const {
    if (!known_method(method)) throw std::invalid_argument("unknown method: " + method);
    if (d_grid.empty() || lambda_grid.empty() || n_grid.empty())
        throw std::invalid_argument("sweep grids must be non-empty");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (output_dir.empty()) throw std::invalid_argument("output_dir must be set");
    if (!(success_threshold > 0.0))
        throw std::invalid_argument("success_threshold must be > 0");
    if (k < 3) throw std::invalid_argument("k must be >= 3");
}

SweepConfig sweep_config_from_json(const json& j) {
    SweepConfig c;
    for (const char* key : {"k", "d_grid", "lambda_grid", "n_grid", "noise"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("sweep config: missing '") + key + "'");
    c.k = j.at("k").get<int>();
    c.d_grid = j.at("d_grid").get<std::vector<int>>();
    c.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    c.n_grid = j.at("n_grid").get<std::vector<long>>();
    c.noise = noise_model_from_json(j.at("noise"));
    if (j.contains("method")) c.method = j.at("method").get<std::string>();
    if (j.contains("method_config")) c.method_config = j.at("method_config");
    if (j.contains("trials")) c.trials = j.at("trials").get<long>();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("success_threshold"))
        c.success_threshold = j.at("success_threshold").get<double>();
    if (j.contains("output_dir"))
        c.output_dir = std::filesystem::path(j.at("output_dir").get<std::string>());
    return c;
}

SweepSummary run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.output_dir);

    struct Cell {
        int d;
        std::size_t lambda_index;
        long num_samples;
    };
    std::vector<Cell> cells;
    for (int d : cfg.d_grid)
        for (std::size_t li = 0; li < cfg.lambda_grid.size(); ++li)
            for (long n : cfg.n_grid) cells.push_back({d, li, n});

    std::vector<std::optional<SweepRow>> rows(cells.size());
    std::vector<std::string> errors(cells.size());

    run_jobs(static_cast<long>(cells.size()), [&](long idx) {
        const Cell& cell = cells[static_cast<std::size_t>(idx)];
        const double lambda = cfg.lambda_grid[cell.lambda_index];
        long hits = 0;
        try {
            for (long trial = 0; trial < cfg.trials; ++trial) {
                StreamConfig sc;
                sc.d = cell.d;
                sc.k = cfg.k;
                sc.lambda = lambda;
                sc.noise = cfg.noise;
                sc.seed = derive_seed(
                    cfg.master_seed,
                    {kSeedTagTrial, static_cast<std::uint64_t>(cell.d),
                     static_cast<std::uint64_t>(cell.lambda_index),
                     static_cast<std::uint64_t>(cell.num_samples),
                     static_cast<std::uint64_t>(trial)});
                ObservationStream stream(sc);
                RecoveryResult res =
                    dispatch_method(cfg.method, stream, cfg.method_config, cell.num_samples);
                if (res.error <= cfg.success_threshold) ++hits;
            }
            rows[static_cast<std::size_t>(idx)] =
                SweepRow{cell.d, lambda, cell.num_samples, cfg.k,
                         static_cast<double>(hits) / static_cast<double>(cfg.trials)};
        } catch (const BudgetExceededError& e) {
            errors[static_cast<std::size_t>(idx)] =
                "d=" + std::to_string(cell.d) + " lambda=" + fmt_double(lambda) +
                " N=" + std::to_string(cell.num_samples) + ": " + e.what();
        }
    });

    SweepSummary summary;
    for (const auto& r : rows)
        if (r) summary.rows.push_back(*r);
    for (const auto& e : errors)
        if (!e.empty()) summary.cell_errors.push_back(e);

    const std::filesystem::path path = cfg.output_dir / "sweep.csv";
    std::ofstream f(path, std::ios::trunc);
    f << "d,lambda,N,k,success_rate\n";
    for (const SweepRow& r : summary.rows)
        f << r.d << ',' << fmt_double(r.lambda) << ',' << r.num_samples << ',' << r.k << ','
          << fmt_double(r.success_rate) << "\n";
    if (!f) throw std::runtime_error("cannot write " + path.string());
    summary.outputs.push_back(path);
    return summary;
}

}  // namespace tpca
