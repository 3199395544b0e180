#include "gapbench/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "gapbench/diffusion.hpp"
#include "gapbench/errors.hpp"

namespace gapbench {

EstimateCI make_estimate(const std::vector<double>& values, std::uint64_t master_seed) {
    EstimateCI e;
    e.samples = static_cast<std::int64_t>(values.size());
    e.master_seed = master_seed;
    if (values.empty()) return e;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    if (values.size() > 1) {
        double var = ss / static_cast<double>(values.size() - 1);
        e.half_width = kZ99 * std::sqrt(var / static_cast<double>(values.size()));
    }
    return e;
}

template <class Num>
Num sigma_exact_t(const ModelSpec& m, const Bits& seeds, const ExactOptions& opt,
                  const std::vector<Rational>* exact_weights) {
    ExactEngine<Num> engine(m, nullptr, exact_weights, &seeds, false, opt);
    return engine.sigma(seeds);
}

template double sigma_exact_t<double>(const ModelSpec&, const Bits&, const ExactOptions&,
                                      const std::vector<Rational>*);
template Rational sigma_exact_t<Rational>(const ModelSpec&, const Bits&, const ExactOptions&,
                                          const std::vector<Rational>*);

double sigma_exact(const ModelSpec& m, const std::vector<VertexId>& seeds,
                   const ExactOptions& opt) {
    return sigma_exact_t<double>(m, make_vertex_set(m.graph.n, seeds), opt);
}

Rational sigma_exact_rational(const ModelSpec& m, const std::vector<VertexId>& seeds,
                              const ExactOptions& opt) {
    return sigma_exact_t<Rational>(m, make_vertex_set(m.graph.n, seeds), opt);
}

EstimateCI sigma_mc(const ModelSpec& m, const std::vector<VertexId>& seeds, std::int64_t n,
                    const RngStream& rng) {
    if (n < 2) throw BadParams("sigma_mc needs at least two samples");
    std::vector<double> vals;
    vals.reserve(n);
    Bits seed_bits = make_vertex_set(m.graph.n, seeds);
    if (m.kind == ModelKind::GTM) {
        for (std::int64_t i = 0; i < n; ++i) {
            RngStream r = rng.derive(i);
            ThresholdRealization theta = sample_thresholds(m, r);
            vals.push_back(static_cast<double>(
                total_weight(m.graph, gtm_cascade_bits(m, theta, seed_bits))));
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i) {
            RngStream r = rng.derive(i);
            Realization phi = sample_realization(m, r);
            vals.push_back(
                static_cast<double>(total_weight(m.graph, cascade_bits(m, phi, seed_bits))));
        }
    }
    return make_estimate(vals, rng.master_seed());
}

template <class Num>
std::vector<Num> sigma_exact_all_subsets(const ModelSpec& m, const ExactOptions& opt) {
    const WeightedDigraph& g = m.graph;
    if (g.n > 20) throw TooLargeToEnumerate("all-subsets table limited to 20 vertices");
    ExactEngine<Num> engine(m, nullptr, nullptr, nullptr, true, opt);
    std::size_t size = std::size_t{1} << g.n;
    std::vector<Num> table(size, NumOps<Num>::from_int(0));
    std::vector<std::uint32_t> reach(g.n);
    engine.for_each([&](const Num& prob) {
        for (VertexId v = 0; v < g.n; ++v) {
            Bits b(g.n);
            b.set(v);
            std::uint32_t mask = 0;
            engine.closure(b).for_each([&](int u) { mask |= std::uint32_t{1} << u; });
            reach[v] = mask;
        }
        for (std::uint32_t s = 0; s < size; ++s) {
            std::uint32_t infected = 0;
            for (VertexId v = 0; v < g.n; ++v)
                if (s & (std::uint32_t{1} << v)) infected |= reach[v];
            std::int64_t w = 0;
            for (VertexId v = 0; v < g.n; ++v)
                if (infected & (std::uint32_t{1} << v)) w += g.vertex_weight[v];
            table[s] = table[s] + prob * NumOps<Num>::from_int(w);
        }
    });
    return table;
}

template std::vector<double> sigma_exact_all_subsets<double>(const ModelSpec&, const ExactOptions&);
template std::vector<Rational> sigma_exact_all_subsets<Rational>(const ModelSpec&,
                                                                 const ExactOptions&);

template <class Num>
Num conditioned_sigma_t(const ConditionedModel& cm, const Bits& extra, const ExactOptions& opt) {
    Bits seeds = cm.known_bits;
    seeds |= extra;
    const std::vector<Rational>* ew = nullptr;
    if constexpr (std::is_same_v<Num, Rational>) ew = &cm.exact_edge_weight;
    return sigma_exact_t<Num>(cm.reduced, seeds, opt, ew);
}

template double conditioned_sigma_t<double>(const ConditionedModel&, const Bits&,
                                            const ExactOptions&);
template Rational conditioned_sigma_t<Rational>(const ConditionedModel&, const Bits&,
                                                const ExactOptions&);

double conditional_sigma_exact(const ModelSpec& m, const PartialRealization& partial,
                               const std::vector<VertexId>& base_seeds,
                               const std::vector<VertexId>& extra, const ExactOptions& opt) {
    ConditionedModel cm = condition_model(m, partial, base_seeds);
    return conditioned_sigma_t<double>(cm, make_vertex_set(m.graph.n, extra), opt);
}

Rational conditional_sigma_exact_rational(const ModelSpec& m, const PartialRealization& partial,
                                          const std::vector<VertexId>& base_seeds,
                                          const std::vector<VertexId>& extra,
                                          const ExactOptions& opt) {
    ConditionedModel cm = condition_model(m, partial, base_seeds);
    return conditioned_sigma_t<Rational>(cm, make_vertex_set(m.graph.n, extra), opt);
}

EstimateCI conditional_sigma_mc(const ModelSpec& m, const PartialRealization& partial,
                                const std::vector<VertexId>& base_seeds,
                                const std::vector<VertexId>& extra, std::int64_t n,
                                const RngStream& rng) {
    ConditionedModel cm = condition_model(m, partial, base_seeds);
    Bits seeds = cm.known_bits;
    seeds |= make_vertex_set(m.graph.n, extra);
    std::vector<double> vals;
    vals.reserve(n);
    for (std::int64_t i = 0; i < n; ++i) {
        RngStream r = rng.derive(i);
        Realization phi = sample_realization(cm.reduced, r);
        vals.push_back(static_cast<double>(
            total_weight(cm.reduced.graph, cascade_bits(cm.reduced, phi, seeds))));
    }
    return make_estimate(vals, rng.master_seed());
}

EstimateCI gtm_conditional_sigma_mc(const GtmConditionedModel& cm,
                                    const std::vector<VertexId>& extra, std::int64_t n,
                                    const RngStream& rng) {
    const ModelSpec& rm = cm.reduced;
    Bits seeds(rm.graph.n);
    for (VertexId v : extra)
        if (!cm.known_bits.test(v)) seeds.set(v);
    double base = static_cast<double>(total_weight(rm.graph, cm.known_bits));
    std::vector<double> vals;
    vals.reserve(n);
    for (std::int64_t i = 0; i < n; ++i) {
        RngStream r = rng.derive(i);
        ThresholdRealization theta = sample_thresholds(rm, r);
        Bits infected = gtm_cascade_bits(rm, theta, seeds);
        double w = 0.0;
        infected.for_each([&](int v) {
            if (!cm.known_bits.test(v)) w += static_cast<double>(rm.graph.vertex_weight[v]);
        });
        vals.push_back(base + w);
    }
    return make_estimate(vals, rng.master_seed());
}

}  // namespace gapbench
