#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapbench/instances.hpp"
#include "gapbench/policy.hpp"

namespace gapbench {

struct ValueOrCI {
    double value = 0.0;
    double ci99 = 0.0;
    std::int64_t samples = 0;  // 0 = exact
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// One gap measurement: non-adaptive greedy, adaptive greedy, the risk-free
// variant, optional brute-force optima, and the ratios (CI ratios use
// conservative interval arithmetic).
struct GapReport {
    std::string instance;
    int k = 0;
    FeedbackKind feedback = FeedbackKind::FullAdoption;
    EvalMode mode = EvalMode::Exact;
    std::uint64_t seed = 0;
    std::int64_t samples = 0;

    std::vector<VertexId> greedy_seeds;
    ValueOrCI nonadaptive;
    ValueOrCI adaptive;
    ValueOrCI risk_free;
    std::optional<double> optimal_nonadaptive;
    std::optional<double> optimal_adaptive;

    Interval ratio_adaptive;   // adaptive / nonadaptive
    Interval ratio_risk_free;  // risk_free / nonadaptive
    std::int64_t runtime_ms = 0;
};

struct GapOptions {
    EvalMode mode = EvalMode::Exact;
    std::int64_t samples = 10000;        // outer Monte Carlo samples
    std::int64_t inner_samples = 1000;   // marginal-evaluation pool size
    bool with_optimal = false;
    std::uint64_t seed = 1;
    ExactOptions exact;
};

GapReport measure_gap(const ModelSpec& m, const std::string& descriptor, int k, FeedbackKind fb,
                      const GapOptions& opt);

// Results record; runtime is included only when `timings` is set so that
// fixed-seed runs are byte-identical.
std::string result_record_json(const GapReport& r, bool timings);
std::string gap_report_json(const GapReport& r, bool timings);

struct ExperimentJob {
    InstanceSpec instance;
    int k = 1;
    FeedbackKind feedback = FeedbackKind::FullAdoption;
    GapOptions options;
};

struct ExperimentConfig {
    std::uint64_t master_seed = 1;
    bool timings = false;
    std::vector<ExperimentJob> jobs;
};

ExperimentConfig parse_experiment_config(const std::string& path,
                                         std::optional<std::uint64_t> seed_override);

// Runs all jobs (concurrently, one RNG stream per job), writes
// results.json and summary.csv into out_dir, and returns the reports.
std::vector<GapReport> run_experiment(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace gapbench
