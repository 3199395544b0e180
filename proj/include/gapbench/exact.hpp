#pragma once

#include <cstdint>
#include <vector>

#include "gapbench/errors.hpp"
#include "gapbench/model.hpp"
#include "gapbench/numeric.hpp"
#include "gapbench/realization.hpp"

namespace gapbench {

struct ExactOptions {
    // cap on the product of per-vertex triggering-set-space sizes
    double max_states = 16777216.0;  // 2^24
    // cap on memoized states in adaptive decision-tree evaluation
    std::size_t max_tree_nodes = 1u << 20;
    // cap on enumerated k-subsets in the brute-force non-adaptive oracle
    double max_subsets = 1e6;
};

// Exact enumeration over the joint triggering distribution of a model,
// optionally conditioned on a partial realization.  The joint space is
// factored into independent "axes" (one per undetermined IC in-edge, one per
// undetermined LT vertex) and restricted to the subgraph reachable from a
// given seed set; everything unreachable is marginalized away, which keeps
// the state count equal to what actually needs enumerating.
template <class Num>
class ExactEngine {
  public:
    // `reach_from`: restrict to vertices reachable from this set via
    //   not-known-blocked edges; nullptr enumerates the full universe.
    // `include_seed_target_axes`: keep axes for in-edges of the reach seeds
    //   (needed when edge statuses are inspected, e.g. feedback classes; the
    //   plain sigma computation can drop them).
    // `exact_weights`: per-edge exact weights (conditioned models); only used
    //   when Num == Rational.
    ExactEngine(const ModelSpec& m, const PartialRealization* partial,
                const std::vector<Rational>* exact_weights, const Bits* reach_from,
                bool include_seed_target_axes, const ExactOptions& opt);

    double state_count() const { return state_count_; }
    const Bits& universe() const { return universe_; }

    // Iterates all joint assignments; fn(prob) may query live()/closure().
    template <class Fn>
    void for_each(Fn&& fn) {
        recurse(0, NumOps<Num>::from_int(1), fn);
    }

    bool live(int eid) const { return live_[eid] != 0; }

    // Reachability from `seeds` via live edges; valid inside for_each, and
    // only for seed sets within the restricted universe.
    Bits closure(const Bits& seeds) const;

    // Expected total weight of the closure of `seeds`.
    Num sigma(const Bits& seeds);

  private:
    struct Option {
        std::uint32_t live_mask;
        Num prob;
    };
    struct Axis {
        std::vector<int> edges;
        std::vector<Option> options;
    };

    template <class Fn>
    void recurse(std::size_t i, Num prob, Fn& fn) {
        if (i == axes_.size()) {
            fn(prob);
            return;
        }
        const Axis& ax = axes_[i];
        for (const Option& opt : ax.options) {
            for (std::size_t j = 0; j < ax.edges.size(); ++j)
                live_[ax.edges[j]] = (opt.live_mask >> j) & 1;
            recurse(i + 1, prob * opt.prob, fn);
        }
        for (int e : ax.edges) live_[e] = 0;
    }

    Num edge_weight(int eid) const;

    const ModelSpec& m_;
    const std::vector<Rational>* exact_weights_;
    std::vector<Axis> axes_;
    std::vector<std::uint8_t> live_;  // current statuses, indexed by edge id
    Bits universe_;
    double state_count_ = 1.0;
};

using ExactEngineD = ExactEngine<double>;
using ExactEngineQ = ExactEngine<Rational>;

}  // namespace gapbench
