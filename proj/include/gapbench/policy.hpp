#pragma once

#include <functional>
#include <vector>

#include "gapbench/evaluate.hpp"
#include "gapbench/feedback.hpp"
#include "gapbench/model.hpp"

namespace gapbench {

enum class EvalMode { Exact, MonteCarlo };

// How marginal gains are evaluated inside policies.
struct EvalOptions {
    EvalMode mode = EvalMode::Exact;
    std::int64_t samples = 10000;  // common-random-number pool size per iteration
    ExactOptions exact;
    RngStream rng;
};

// Non-adaptive greedy output; the length-k prefix is the greedy seed set
// S^g(k) for every k up to the order length.
struct GreedyOrder {
    std::vector<VertexId> order;
    std::vector<double> marginal_at_pick;
};

GreedyOrder greedy_nonadaptive(const ModelSpec& m, int k, const EvalOptions& eval);

// One greedy-adaptive pick: argmax over unseeded candidates of the
// conditional expected total weight, ties to the lowest vertex id.
VertexId adaptive_greedy_step(const ModelSpec& m, const std::vector<VertexId>& seeds,
                              const PartialRealization& partial, const EvalOptions& eval);

// First vertex of the precomputed greedy order not known to be infected.
VertexId risk_free_step(const ModelSpec& m, const GreedyOrder& order,
                        const std::vector<VertexId>& seeds, const PartialRealization& partial);

struct Policy {
    enum class Kind { AdaptiveGreedy, RiskFree, Fixed, Custom };
    using CustomFn = std::function<VertexId(const ModelSpec&, const std::vector<VertexId>&,
                                            const PartialRealization&)>;

    Kind kind = Kind::AdaptiveGreedy;
    GreedyOrder order;              // RiskFree
    std::vector<VertexId> fixed;    // Fixed
    CustomFn custom;                // Custom

    static Policy adaptive_greedy() { return {}; }
    static Policy risk_free(GreedyOrder o) {
        Policy p;
        p.kind = Kind::RiskFree;
        p.order = std::move(o);
        return p;
    }
    static Policy fixed_list(std::vector<VertexId> seeds) {
        Policy p;
        p.kind = Kind::Fixed;
        p.fixed = std::move(seeds);
        return p;
    }
    static Policy custom_fn(CustomFn fn) {
        Policy p;
        p.kind = Kind::Custom;
        p.custom = std::move(fn);
        return p;
    }
};

const char* to_string(Policy::Kind k);

// Trace of one adaptive execution.
struct PolicyRun {
    std::vector<VertexId> seeds_in_order;
    std::vector<PartialRealization> snapshots;       // i-th: feedback of first i+1 seeds
    std::vector<LevelRealization> level_snapshots;   // GTM runs
    std::vector<VertexId> infected;
    double objective = 0.0;
};

PolicyRun run_policy(const ModelSpec& m, const Policy& policy, int k, FeedbackKind fb,
                     const Realization& phi, const EvalOptions& eval);
PolicyRun run_policy_gtm(const ModelSpec& m, const Policy& policy, int k, FeedbackKind fb,
                         const ThresholdRealization& theta, const EvalOptions& eval);

// Monte Carlo estimate of sigma^fb(policy, k).
EstimateCI sigma_adaptive(const ModelSpec& m, const Policy& policy, int k, FeedbackKind fb,
                          std::int64_t n, const RngStream& rng, const EvalOptions& inner_eval);

// Exact sigma^fb(policy, k) by recursion over reachable feedback classes with
// memoization on canonicalized partial realizations.
double sigma_adaptive_exact(const ModelSpec& m, const Policy& policy, int k, FeedbackKind fb,
                            const ExactOptions& opt = {});
Rational sigma_adaptive_exact_rational(const ModelSpec& m, const Policy& policy, int k,
                                       FeedbackKind fb, const ExactOptions& opt = {});

// Exhaustive argmax of sigma_exact over k-subsets of the candidates.
std::pair<std::vector<VertexId>, double> optimal_nonadaptive_exact(const ModelSpec& m, int k,
                                                                   const ExactOptions& opt = {});
std::pair<std::vector<VertexId>, Rational> optimal_nonadaptive_exact_rational(
    const ModelSpec& m, int k, const ExactOptions& opt = {});

// Value of the optimal adaptive policy by backward induction over
// (seed set, reachable feedback) states.
double optimal_adaptive_exact(const ModelSpec& m, int k, FeedbackKind fb,
                              const ExactOptions& opt = {});
Rational optimal_adaptive_exact_rational(const ModelSpec& m, int k, FeedbackKind fb,
                                         const ExactOptions& opt = {});

// Expected number of adaptive-greedy seeds until `target` is known infected
// (full-adoption feedback); finite only when exhausting the candidates
// guarantees infection.
double exact_expected_steps_to_infect(const ModelSpec& m, VertexId target,
                                      const ExactOptions& opt = {});

}  // namespace gapbench
