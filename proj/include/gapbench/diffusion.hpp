#pragma once

#include <vector>

#include "gapbench/model.hpp"
#include "gapbench/realization.hpp"
#include "gapbench/rng.hpp"

namespace gapbench {

// Samples a full live/blocked realization of a triggering model (ICM, LTM or
// mixture).  IC vertices draw their in-edges independently; LT vertices draw
// at most one live in-edge.
Realization sample_realization(const ModelSpec& m, RngStream& rng);

// Deterministic cascade: all vertices reachable from `seeds` via live edges.
std::vector<VertexId> cascade(const ModelSpec& m, const Realization& phi,
                              const std::vector<VertexId>& seeds);
Bits cascade_bits(const ModelSpec& m, const Realization& phi, const Bits& seeds);

// Independent uniform (0,1] thresholds for a GTM model.
ThresholdRealization sample_thresholds(const ModelSpec& m, RngStream& rng);

// Least fixed point of the round process "v becomes infected when
// f_v(infected in-neighbors) >= theta_v".
std::vector<VertexId> gtm_cascade(const ModelSpec& m, const ThresholdRealization& theta,
                                  const std::vector<VertexId>& seeds);
Bits gtm_cascade_bits(const ModelSpec& m, const ThresholdRealization& theta, const Bits& seeds);

// Round-based processes following the original model definitions; used as
// equivalence oracles against the triggering formulation.
std::vector<VertexId> original_icm_process(const ModelSpec& m, const std::vector<VertexId>& seeds,
                                           RngStream& rng);
std::vector<VertexId> original_ltm_process(const ModelSpec& m, const std::vector<VertexId>& seeds,
                                           RngStream& rng);

}  // namespace gapbench
