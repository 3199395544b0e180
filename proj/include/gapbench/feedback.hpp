#pragma once

#include <vector>

#include "gapbench/model.hpp"
#include "gapbench/numeric.hpp"
#include "gapbench/realization.hpp"

namespace gapbench {

enum class FeedbackKind { FullAdoption, Myopic };

const char* to_string(FeedbackKind k);

// Reveals the status of every out-edge of an infected vertex (full adoption)
// or of a seed (myopic); everything else stays Unknown.
PartialRealization full_adoption_feedback(const ModelSpec& m, const Realization& phi,
                                          const std::vector<VertexId>& seeds);
PartialRealization myopic_feedback(const ModelSpec& m, const Realization& phi,
                                   const std::vector<VertexId>& seeds);
PartialRealization feedback(const ModelSpec& m, FeedbackKind kind, const Realization& phi,
                            const std::vector<VertexId>& seeds);

// Seeds plus everything reachable from them along revealed-live edges; the
// vertices the seed-picker knows to be infected.  Throws InconsistentPartial
// if the partial cannot be a feedback of `seeds`.
std::vector<VertexId> known_infected(const ModelSpec& m, const PartialRealization& partial,
                                     const std::vector<VertexId>& seeds);
Bits known_infected_bits(const ModelSpec& m, const PartialRealization& partial, const Bits& seeds);

// The conditioned diffusion model given a partial realization: untouched
// edges survive, per-vertex triggering distributions are renormalized on the
// revealed statuses.  Edge weights are carried both as doubles (for
// sampling) and as exact rationals (for exact-mode identities).
struct ConditionedModel {
    ModelSpec reduced;
    std::vector<Rational> exact_edge_weight;  // parallel to reduced.graph.edges
    std::vector<VertexId> known;              // sorted known-infected set
    Bits known_bits;
};

// Triggering-model conditioning (Bayes over per-vertex triggering sets).
// When an LT vertex has a revealed live in-edge its triggering set is fully
// determined, so all sibling in-edges are dropped as well; this strengthens
// the partial realization to the exact conditional distribution.
ConditionedModel condition_model(const ModelSpec& m, const PartialRealization& partial,
                                 const std::vector<VertexId>& seeds);

// Marks sibling in-edges of LT vertices with a revealed live in-edge as
// Blocked (their triggering set is a known singleton).  Used to canonicalize
// partial realizations before comparing or memoizing them.
PartialRealization strengthen_partial(const ModelSpec& m, PartialRealization partial);

// GTM feedback: levels of uninfected vertices, checkmarks on infected ones.
LevelRealization gtm_full_adoption_feedback(const ModelSpec& m, const ThresholdRealization& theta,
                                            const std::vector<VertexId>& seeds);
LevelRealization gtm_myopic_feedback(const ModelSpec& m, const ThresholdRealization& theta,
                                     const std::vector<VertexId>& seeds);
LevelRealization gtm_feedback(const ModelSpec& m, FeedbackKind kind,
                              const ThresholdRealization& theta,
                              const std::vector<VertexId>& seeds);

// GTM conditioning: removes the known-infected set T and rescales each
// remaining local function to f'(Y) = (f((G(v) n T) u Y) - level) / (1 - level).
struct GtmConditionedModel {
    ModelSpec reduced;            // GTM over the surviving vertex set (ids preserved)
    std::vector<VertexId> known;  // T, sorted
    Bits known_bits;
};

GtmConditionedModel gtm_condition(const ModelSpec& m, const LevelRealization& levels);

}  // namespace gapbench
