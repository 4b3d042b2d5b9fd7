#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbr/recovery.hpp"
#include "sbr/signals.hpp"

namespace sbr {

/// A denoising method entry of a benchmark plan.
struct MethodConfig {
    enum class Kind { penalized, constrained, lasso };
    std::string name;
    Kind kind = Kind::penalized;
    RecoveryConfig recovery;     ///< filter methods (block layout included)
    std::int64_t oversample = 4; ///< lasso grid oversampling
};

struct BenchScenario {
    ScenarioSpec spec;
    int trials = 0; ///< 0 = default (100 for 1-D, 40 for 2-D)
};

struct BenchPlan {
    std::vector<BenchScenario> scenarios;
    std::vector<double> snrs = {1, 2, 4, 8, 16};
    std::vector<MethodConfig> methods;
    std::uint64_t master_seed = 0;
    int workers = 0; ///< 0 = hardware concurrency
    double timeout_seconds = 60.0;
    /// Wall-clock times are always kept in BenchResult::trials; they enter the
    /// runtime_ms column of results.csv only when set (reruns are then no
    /// longer bit-identical).
    bool runtime_in_csv = false;
    std::string out_dir; ///< empty = no files written
};

struct TrialRecord {
    std::string scenario;
    std::string method;
    double snr = 0;
    int trial = 0;
    double error = 0; ///< NaN when the method failed
    double runtime_ms = 0;
    bool converged = false;
    std::string failure; ///< nonempty when an exception was recorded
};

struct SummaryRecord {
    std::string scenario;
    std::string method;
    double snr = 0;
    double mean_error = 0;
    double stderr_error = 0;
    int trials_used = 0;
    int excluded = 0;
};

struct BenchResult {
    std::vector<TrialRecord> trials;
    std::vector<SummaryRecord> summary;
    std::string results_csv;  ///< exact file contents (also written to out_dir)
    std::string summary_csv;
    std::string plan_snapshot; ///< JSON echo of the executed plan (plan.json in out_dir)
};

/// Canonical JSON form of a plan; parse_plan(serialize_plan(p)) reproduces p.
std::string serialize_plan(const BenchPlan& plan);

/// Parse a JSON plan file (documented in the README).
BenchPlan load_plan(const std::string& path);
BenchPlan parse_plan(const std::string& json_text);

/// Runs the Monte-Carlo protocol: per trial one (x, y) pair shared by every
/// method, errors ||x_hat - x||_2 recorded per trial, summaries and SVG curves
/// (mean error vs 1/SNR) written to out_dir.
BenchResult run(const BenchPlan& plan);

struct StochasticBoundReport {
    std::string scenario;
    double rho = 0;
    double sigma = 0;
    double percentile90 = 0;
    double envelope = 0;       ///< 20 sigma rho^2 sqrt(1 + ln 10)
    double bias_zero_noise = 0;
    bool within = false;
    int trials = 0;
};

/// Monte-Carlo check of the oracle-filter risk envelope on subspace signals
/// with constructed witnesses (constants and an on-grid oscillation pair).
std::vector<StochasticBoundReport> validate_stochastic_bounds(int trials, std::uint64_t seed);

} // namespace sbr
