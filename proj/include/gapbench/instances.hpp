#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gapbench/evaluate.hpp"
#include "gapbench/model.hpp"
#include "gapbench/rng.hpp"

namespace gapbench {

struct GeneratedInstance {
    ModelSpec model;
    int k = 1;  // recommended seed budget
    std::map<VertexId, std::string> names;
    std::string descriptor;
};

// Worst-case ICM instance: a dominant seed s, a probe vertex t that reveals
// which of two seeding trends pays off, non-overlapping u-columns versus
// overlapping v-rows.  The recommended budget is k+1 seeds.  Throws BadParams
// on divisibility violations and InequalityCheckFailed when W is too small
// for the intended greedy trajectories.
GeneratedInstance gen_icm_tight(int k, std::int64_t W, bool validate_trajectory = true);

// LTM counterpart with a complete bipartite u-v core.
GeneratedInstance gen_ltm_tight(int k, std::int64_t W, bool validate_trajectory = true);

// (d+1)-level full d-ary in-arborescence with tree-edge weight 1/d, root
// weight W+1 (or W explicit pendants), candidates = leaves,
// k = ceil(2 ((d+1)/2)^d).
GeneratedInstance gen_tree_prescribed(int d, std::int64_t W, bool pendants = false);

struct MixtureMeta {
    int d = 0;
    int M = 0;
    std::int64_t W = 0;
    std::int64_t leaves_per_tree = 0;
    std::vector<VertexId> roots;
    std::vector<std::vector<VertexId>> leaves;  // per tree
    bool explicit_a = false;
    VertexId a_base = -1;  // first A-vertex id in explicit mode
};

// M tree gadgets with IC-labelled leaves; in explicit mode every connector
// vertex a_z (one per leaf-index vector z) is materialized, in implicit mode
// the trees stand alone and A-seeds are handled through the helpers below.
GeneratedInstance gen_mixture(int d, int M, std::int64_t W, bool explicit_a,
                              MixtureMeta* meta_out = nullptr);

// One leaf per tree whose root path contains no known-infected vertex
// (lowest ids; arbitrary leaf when a tree's root is already infected).
std::vector<VertexId> implicit_mixture_candidate(const MixtureMeta& meta, const ModelSpec& tree_model,
                                                 const Bits& known);

// Explicit-mode vertex id of the connector seeding the given per-tree leaves.
VertexId explicit_a_vertex(const MixtureMeta& meta, const std::vector<VertexId>& leaf_choice);

// Monte Carlo sigma^f of the adaptive fresh-path connector policy on an
// implicit mixture instance (each seed infects one chosen leaf per tree).
EstimateCI sigma_adaptive_implicit_mixture(const MixtureMeta& meta, const ModelSpec& tree_model,
                                           int k, std::int64_t n, const RngStream& rng);

// Random simple digraph with dyadic weights valid for the requested kind.
GeneratedInstance gen_random(int n, double density, ModelKind kind, RngStream rng);

// Side-by-side union of two models (no cross edges); vertex ids of `b` are
// shifted by a.graph.n.
ModelSpec disjoint_union(const ModelSpec& a, const ModelSpec& b);

// Generator dispatch used by the CLI and the experiment harness.
struct InstanceSpec {
    std::string generator;  // icm_tight | ltm_tight | tree_prescribed | mixture | random | file
    std::map<std::string, std::string> params;
};

GeneratedInstance build_instance(const InstanceSpec& spec);

}  // namespace gapbench
