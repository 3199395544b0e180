#include "gapbench/diffusion.hpp"

#include <deque>

#include "gapbench/errors.hpp"

namespace gapbench {

static void require_triggering(const ModelSpec& m, const char* op) {
    if (!m.is_triggering()) throw WrongModelKind(std::string(op) + " requires a triggering model");
}

static void require_gtm(const ModelSpec& m, const char* op) {
    if (m.kind != ModelKind::GTM) throw WrongModelKind(std::string(op) + " requires a GTM model");
}

Realization sample_realization(const ModelSpec& m, RngStream& rng) {
    require_triggering(m, "sample_realization");
    const WeightedDigraph& g = m.graph;
    Realization phi;
    phi.status.assign(g.edge_count(), EdgeStatus::Blocked);
    for (VertexId v = 0; v < g.n; ++v) {
        const auto& in = g.in_edges[v];
        if (in.empty()) continue;
        if (m.label_of(v) == VertexLabel::IC) {
            for (int eid : in)
                if (rng.bernoulli(g.edges[eid].weight)) phi.status[eid] = EdgeStatus::Live;
        } else {
            double r = rng.uniform01();
            double cum = 0.0;
            for (int eid : in) {
                cum += g.edges[eid].weight;
                if (r < cum) {
                    phi.status[eid] = EdgeStatus::Live;
                    break;
                }
            }
        }
    }
    return phi;
}

Bits cascade_bits(const ModelSpec& m, const Realization& phi, const Bits& seeds) {
    const WeightedDigraph& g = m.graph;
    Bits infected = seeds;
    std::deque<VertexId> frontier;
    seeds.for_each([&](int v) { frontier.push_back(v); });
    while (!frontier.empty()) {
        VertexId u = frontier.front();
        frontier.pop_front();
        for (int eid : g.out_edges[u]) {
            if (!phi.live(eid)) continue;
            VertexId w = g.edges[eid].dst;
            if (!infected.test(w)) {
                infected.set(w);
                frontier.push_back(w);
            }
        }
    }
    return infected;
}

std::vector<VertexId> cascade(const ModelSpec& m, const Realization& phi,
                              const std::vector<VertexId>& seeds) {
    Bits s = make_vertex_set(m.graph.n, seeds);
    Bits out = cascade_bits(m, phi, s);
    std::vector<VertexId> res;
    out.for_each([&](int v) { res.push_back(v); });
    return res;
}

ThresholdRealization sample_thresholds(const ModelSpec& m, RngStream& rng) {
    require_gtm(m, "sample_thresholds");
    ThresholdRealization t;
    t.theta.resize(m.graph.n);
    for (auto& x : t.theta) x = rng.uniform_open_closed();
    return t;
}

Bits gtm_cascade_bits(const ModelSpec& m, const ThresholdRealization& theta, const Bits& seeds) {
    require_gtm(m, "gtm_cascade");
    const WeightedDigraph& g = m.graph;
    Bits infected = seeds;
    bool changed = true;
    while (changed) {
        changed = false;
        for (VertexId v = 0; v < g.n; ++v) {
            if (infected.test(v)) continue;
            std::uint64_t mask = 0;
            const auto& in = g.in_edges[v];
            for (std::size_t i = 0; i < in.size(); ++i)
                if (infected.test(g.edges[in[i]].src)) mask |= std::uint64_t{1} << i;
            if (mask != 0 && m.local[v](mask) >= theta.theta[v]) {
                infected.set(v);
                changed = true;
            }
        }
    }
    return infected;
}

std::vector<VertexId> gtm_cascade(const ModelSpec& m, const ThresholdRealization& theta,
                                  const std::vector<VertexId>& seeds) {
    Bits s = make_vertex_set(m.graph.n, seeds);
    return gtm_cascade_bits(m, theta, s).to_vector();
}

std::vector<VertexId> original_icm_process(const ModelSpec& m, const std::vector<VertexId>& seeds,
                                           RngStream& rng) {
    if (m.kind != ModelKind::ICM) throw WrongModelKind("original_icm_process requires an ICM model");
    const WeightedDigraph& g = m.graph;
    Bits infected = make_vertex_set(g.n, seeds);
    std::vector<VertexId> frontier = infected.to_vector();
    while (!frontier.empty()) {
        std::vector<VertexId> next;
        for (VertexId u : frontier) {
            for (int eid : g.out_edges[u]) {
                VertexId w = g.edges[eid].dst;
                if (infected.test(w)) continue;  // one attempt only on the round it matters
                if (rng.bernoulli(g.edges[eid].weight)) {
                    infected.set(w);
                    next.push_back(w);
                }
            }
        }
        frontier = std::move(next);
    }
    return infected.to_vector();
}

std::vector<VertexId> original_ltm_process(const ModelSpec& m, const std::vector<VertexId>& seeds,
                                           RngStream& rng) {
    if (m.kind != ModelKind::LTM) throw WrongModelKind("original_ltm_process requires an LTM model");
    const WeightedDigraph& g = m.graph;
    std::vector<double> theta(g.n);
    for (auto& x : theta) x = rng.uniform_open_closed();
    Bits infected = make_vertex_set(g.n, seeds);
    bool changed = true;
    while (changed) {
        changed = false;
        for (VertexId v = 0; v < g.n; ++v) {
            if (infected.test(v)) continue;
            double sum = 0.0;
            for (int eid : g.in_edges[v])
                if (infected.test(g.edges[eid].src)) sum += g.edges[eid].weight;
            if (sum >= theta[v]) {
                infected.set(v);
                changed = true;
            }
        }
    }
    return infected.to_vector();
}

}  // namespace gapbench
