#pragma once

#include <cstdint>
#include <vector>

#include "gapbench/exact.hpp"
#include "gapbench/feedback.hpp"
#include "gapbench/model.hpp"
#include "gapbench/rng.hpp"

namespace gapbench {

// z for a two-sided 99% normal CI
inline constexpr double kZ99 = 2.5758293035489004;

// Monte Carlo estimate; reproducible from (master_seed, samples).
struct EstimateCI {
    double mean = 0.0;
    double half_width = 0.0;  // 99% normal-approximation CI
    std::int64_t samples = 0;
    std::uint64_t master_seed = 0;

    double std_error() const { return half_width / kZ99; }
    bool overlaps(const EstimateCI& o) const {
        return mean - half_width <= o.mean + o.half_width &&
               o.mean - o.half_width <= mean + half_width;
    }
};

EstimateCI make_estimate(const std::vector<double>& values, std::uint64_t master_seed);

// Expected total weight of the infected set, by exact enumeration of the
// triggering realization space (throws TooLargeToEnumerate / WrongModelKind).
double sigma_exact(const ModelSpec& m, const std::vector<VertexId>& seeds,
                   const ExactOptions& opt = {});
Rational sigma_exact_rational(const ModelSpec& m, const std::vector<VertexId>& seeds,
                              const ExactOptions& opt = {});

template <class Num>
Num sigma_exact_t(const ModelSpec& m, const Bits& seeds, const ExactOptions& opt,
                  const std::vector<Rational>* exact_weights = nullptr);

// Monte Carlo sigma; works for every model kind (GTM via thresholds).
EstimateCI sigma_mc(const ModelSpec& m, const std::vector<VertexId>& seeds, std::int64_t n,
                    const RngStream& rng);

// sigma over all seed subsets of an <=20 vertex model, indexed by bitmask.
template <class Num>
std::vector<Num> sigma_exact_all_subsets(const ModelSpec& m, const ExactOptions& opt = {});

// Conditional expected total weight given a partial realization: evaluated on
// the conditioned model as sigma_reduced(known u extra).
double conditional_sigma_exact(const ModelSpec& m, const PartialRealization& partial,
                               const std::vector<VertexId>& base_seeds,
                               const std::vector<VertexId>& extra, const ExactOptions& opt = {});
Rational conditional_sigma_exact_rational(const ModelSpec& m, const PartialRealization& partial,
                                          const std::vector<VertexId>& base_seeds,
                                          const std::vector<VertexId>& extra,
                                          const ExactOptions& opt = {});
EstimateCI conditional_sigma_mc(const ModelSpec& m, const PartialRealization& partial,
                                const std::vector<VertexId>& base_seeds,
                                const std::vector<VertexId>& extra, std::int64_t n,
                                const RngStream& rng);

// Same on an already-conditioned model.
template <class Num>
Num conditioned_sigma_t(const ConditionedModel& cm, const Bits& extra, const ExactOptions& opt);

// GTM conditional value via the level-conditioned model:
// weight(T) + sigma_reduced(extra \ T), Monte Carlo.
EstimateCI gtm_conditional_sigma_mc(const GtmConditionedModel& cm,
                                    const std::vector<VertexId>& extra, std::int64_t n,
                                    const RngStream& rng);

}  // namespace gapbench
