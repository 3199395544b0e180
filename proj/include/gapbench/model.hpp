#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gapbench/graph.hpp"

namespace gapbench {

enum class ModelKind { ICM, LTM, Mixture, GTM };

enum class VertexLabel : std::uint8_t { IC, LT };

const char* to_string(ModelKind k);

// Monotone local influence function of one vertex, evaluated on bitmasks over
// the vertex's in-edge positions (bit i = source of in_edges[v][i] infected).
// Evaluations are memoized; copies share the cache.
class LocalInfluence {
  public:
    LocalInfluence() = default;
    explicit LocalInfluence(std::function<double(std::uint64_t)> f)
        : f_(std::move(f)), cache_(std::make_shared<std::unordered_map<std::uint64_t, double>>()) {}

    double operator()(std::uint64_t mask) const {
        if (!f_) return 0.0;
        auto it = cache_->find(mask);
        if (it != cache_->end()) return it->second;
        double val = f_(mask);
        cache_->emplace(mask, val);
        return val;
    }

    bool valid() const { return static_cast<bool>(f_); }

  private:
    std::function<double(std::uint64_t)> f_;
    std::shared_ptr<std::unordered_map<std::uint64_t, double>> cache_;
};

// IC-form local function 1 - prod(1 - w_i) over infected in-edges.
LocalInfluence ic_form_local(std::vector<double> in_weights);
// LT-form local function sum(w_i), clamped to 1.
LocalInfluence lt_form_local(std::vector<double> in_weights);

// A diffusion model: graph plus per-vertex semantics plus optional prescribed
// seed candidates (empty candidate list = every vertex is a candidate).
struct ModelSpec {
    WeightedDigraph graph;
    ModelKind kind = ModelKind::ICM;
    std::vector<VertexLabel> labels;           // per vertex; used iff kind == Mixture
    std::vector<LocalInfluence> local;         // per vertex; used iff kind == GTM
    std::vector<VertexId> candidates;          // sorted; empty = all vertices

    bool is_triggering() const { return kind != ModelKind::GTM; }
    VertexLabel label_of(VertexId v) const {
        switch (kind) {
            case ModelKind::ICM: return VertexLabel::IC;
            case ModelKind::LTM: return VertexLabel::LT;
            default: return labels[v];
        }
    }
    std::vector<VertexId> candidate_list() const;
};

ModelSpec make_model(WeightedDigraph g, ModelKind kind,
                     std::vector<VertexLabel> labels = {},
                     std::vector<VertexId> candidates = {});

ModelSpec make_gtm_model(WeightedDigraph g, std::vector<LocalInfluence> local,
                         std::vector<VertexId> candidates = {});

// Lifts a triggering model to its GTM formulation (IC labels become IC-form
// local functions, LT labels LT-form).
ModelSpec lift_to_gtm(const ModelSpec& m);

// LT in-weight sums may exceed 1 by at most this much (rationals stored as
// doubles).
inline constexpr double kLtSumTolerance = 1e-12;

// Validates label/weight constraints; throws ValidationError subclasses.
void validate_model(const ModelSpec& m);

}  // namespace gapbench
