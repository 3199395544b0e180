#include "gapbench/feedback.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "gapbench/diffusion.hpp"
#include "gapbench/errors.hpp"

namespace gapbench {

const char* to_string(FeedbackKind k) {
    return k == FeedbackKind::FullAdoption ? "full" : "myopic";
}

static PartialRealization reveal_out_edges(const WeightedDigraph& g, const Realization& phi,
                                           const Bits& sources) {
    PartialRealization p = PartialRealization::all_unknown(g.edge_count());
    sources.for_each([&](int u) {
        for (int eid : g.out_edges[u])
            p.status[eid] = phi.live(eid) ? PartialStatus::Live : PartialStatus::Blocked;
    });
    return p;
}

PartialRealization full_adoption_feedback(const ModelSpec& m, const Realization& phi,
                                          const std::vector<VertexId>& seeds) {
    if (!m.is_triggering()) throw WrongModelKind("full_adoption_feedback requires a triggering model");
    Bits infected = cascade_bits(m, phi, make_vertex_set(m.graph.n, seeds));
    return reveal_out_edges(m.graph, phi, infected);
}

PartialRealization myopic_feedback(const ModelSpec& m, const Realization& phi,
                                   const std::vector<VertexId>& seeds) {
    if (!m.is_triggering()) throw WrongModelKind("myopic_feedback requires a triggering model");
    return reveal_out_edges(m.graph, phi, make_vertex_set(m.graph.n, seeds));
}

PartialRealization feedback(const ModelSpec& m, FeedbackKind kind, const Realization& phi,
                            const std::vector<VertexId>& seeds) {
    return kind == FeedbackKind::FullAdoption ? full_adoption_feedback(m, phi, seeds)
                                              : myopic_feedback(m, phi, seeds);
}

Bits known_infected_bits(const ModelSpec& m, const PartialRealization& partial, const Bits& seeds) {
    const WeightedDigraph& g = m.graph;
    // an LT vertex can have at most one live in-edge in any realization
    for (VertexId v = 0; v < g.n; ++v) {
        if (m.is_triggering() && m.label_of(v) == VertexLabel::LT) {
            int live = 0;
            for (int eid : g.in_edges[v]) live += partial.live(eid) ? 1 : 0;
            if (live > 1)
                throw InconsistentPartial("LT vertex " + std::to_string(v) +
                                          " has two revealed live in-edges");
        }
    }
    Bits known = seeds;
    std::deque<VertexId> frontier;
    seeds.for_each([&](int v) { frontier.push_back(v); });
    while (!frontier.empty()) {
        VertexId u = frontier.front();
        frontier.pop_front();
        for (int eid : g.out_edges[u]) {
            if (!partial.live(eid)) continue;
            VertexId w = g.edges[eid].dst;
            if (!known.test(w)) {
                known.set(w);
                frontier.push_back(w);
            }
        }
    }
    // a live edge can only have been revealed if its source is infected;
    // blocked reveals are harmless information whatever their origin
    for (int e = 0; e < g.edge_count(); ++e) {
        if (partial.live(e) && !known.test(g.edges[e].src))
            throw InconsistentPartial("live edge revealed out of a vertex not known infected");
    }
    return known;
}

std::vector<VertexId> known_infected(const ModelSpec& m, const PartialRealization& partial,
                                     const std::vector<VertexId>& seeds) {
    return known_infected_bits(m, partial, make_vertex_set(m.graph.n, seeds)).to_vector();
}

ConditionedModel condition_model(const ModelSpec& m, const PartialRealization& partial,
                                 const std::vector<VertexId>& seeds) {
    if (!m.is_triggering()) throw WrongModelKind("condition_model requires a triggering model");
    const WeightedDigraph& g = m.graph;
    ConditionedModel out;
    out.known_bits = known_infected_bits(m, partial, make_vertex_set(g.n, seeds));
    out.known = out.known_bits.to_vector();

    std::vector<Edge> kept;
    std::vector<Rational> kept_exact;
    for (VertexId v = 0; v < g.n; ++v) {
        const auto& in = g.in_edges[v];
        if (in.empty()) continue;
        if (m.label_of(v) == VertexLabel::IC) {
            // independence: unrevealed in-edges keep their weight
            for (int eid : in) {
                if (partial.known(eid)) continue;
                kept.push_back(g.edges[eid]);
                kept_exact.push_back(rational_from_double(g.edges[eid].weight));
            }
        } else {
            bool has_live = false;
            Rational blocked_sum(0);
            for (int eid : in) {
                if (partial.live(eid)) has_live = true;
                if (partial.blocked(eid)) blocked_sum += rational_from_double(g.edges[eid].weight);
            }
            if (has_live) continue;  // triggering set determined; siblings forced blocked
            Rational denom = Rational(1) - blocked_sum;
            if (denom <= 0 || static_cast<double>(denom) < 1e-15)
                throw InconsistentPartial("no remaining triggering mass at LT vertex " +
                                          std::to_string(v));
            for (int eid : in) {
                if (partial.known(eid)) continue;
                Rational w = rational_from_double(g.edges[eid].weight) / denom;
                Edge e = g.edges[eid];
                e.weight = std::min(1.0, static_cast<double>(w));
                kept.push_back(e);
                kept_exact.push_back(w);
            }
        }
    }

    std::map<VertexId, std::int64_t> weights;
    for (VertexId v = 0; v < g.n; ++v)
        if (g.vertex_weight[v] != 1) weights[v] = g.vertex_weight[v];
    std::vector<VertexLabel> labels(g.n);
    for (VertexId v = 0; v < g.n; ++v) labels[v] = m.label_of(v);
    out.reduced = make_model(build_graph(g.n, weights, kept), ModelKind::Mixture,
                             std::move(labels), m.candidates);
    out.exact_edge_weight = std::move(kept_exact);
    return out;
}

PartialRealization strengthen_partial(const ModelSpec& m, PartialRealization partial) {
    const WeightedDigraph& g = m.graph;
    for (VertexId v = 0; v < g.n; ++v) {
        if (m.label_of(v) != VertexLabel::LT) continue;
        bool has_live = false;
        for (int eid : g.in_edges[v]) has_live = has_live || partial.live(eid);
        if (!has_live) continue;
        for (int eid : g.in_edges[v])
            if (!partial.live(eid)) partial.status[eid] = PartialStatus::Blocked;
    }
    return partial;
}

LevelRealization gtm_full_adoption_feedback(const ModelSpec& m, const ThresholdRealization& theta,
                                            const std::vector<VertexId>& seeds) {
    if (m.kind != ModelKind::GTM) throw WrongModelKind("gtm feedback requires a GTM model");
    const WeightedDigraph& g = m.graph;
    Bits infected = gtm_cascade_bits(m, theta, make_vertex_set(g.n, seeds));
    LevelRealization out = LevelRealization::zeros(g.n);
    for (VertexId v = 0; v < g.n; ++v) {
        if (infected.test(v)) {
            out.infected[v] = 1;
            continue;
        }
        std::uint64_t mask = 0;
        const auto& in = g.in_edges[v];
        for (std::size_t i = 0; i < in.size(); ++i)
            if (infected.test(g.edges[in[i]].src)) mask |= std::uint64_t{1} << i;
        out.level[v] = m.local[v](mask);
    }
    return out;
}

LevelRealization gtm_myopic_feedback(const ModelSpec& m, const ThresholdRealization& theta,
                                     const std::vector<VertexId>& seeds) {
    if (m.kind != ModelKind::GTM) throw WrongModelKind("gtm feedback requires a GTM model");
    const WeightedDigraph& g = m.graph;
    Bits seed_bits = make_vertex_set(g.n, seeds);
    LevelRealization out = LevelRealization::zeros(g.n);
    for (VertexId v = 0; v < g.n; ++v) {
        if (seed_bits.test(v)) {
            out.infected[v] = 1;
            continue;
        }
        std::uint64_t mask = 0;
        const auto& in = g.in_edges[v];
        for (std::size_t i = 0; i < in.size(); ++i)
            if (seed_bits.test(g.edges[in[i]].src)) mask |= std::uint64_t{1} << i;
        double c = m.local[v](mask);
        if (c >= theta.theta[v])
            out.infected[v] = 1;
        else
            out.level[v] = c;
    }
    return out;
}

LevelRealization gtm_feedback(const ModelSpec& m, FeedbackKind kind,
                              const ThresholdRealization& theta,
                              const std::vector<VertexId>& seeds) {
    return kind == FeedbackKind::FullAdoption ? gtm_full_adoption_feedback(m, theta, seeds)
                                              : gtm_myopic_feedback(m, theta, seeds);
}

GtmConditionedModel gtm_condition(const ModelSpec& m, const LevelRealization& levels) {
    if (m.kind != ModelKind::GTM) throw WrongModelKind("gtm_condition requires a GTM model");
    const WeightedDigraph& g = m.graph;
    GtmConditionedModel out;
    out.known_bits = Bits(g.n);
    for (VertexId v = 0; v < g.n; ++v) {
        if (levels.infected[v]) {
            out.known_bits.set(v);
        } else {
            double c = levels.level[v];
            if (c < 0.0 || c > 1.0) throw DegenerateLevel("level outside [0,1]");
            if (c >= 1.0 - 1e-12)
                throw DegenerateLevel("level numerically 1 at uninfected vertex " +
                                      std::to_string(v));
        }
    }
    out.known = out.known_bits.to_vector();

    std::vector<Edge> kept;
    // per-vertex: old in-edge positions that survive, and the infected base mask
    std::vector<std::vector<int>> surviving_pos(g.n);
    std::vector<std::uint64_t> base_mask(g.n, 0);
    for (VertexId v = 0; v < g.n; ++v) {
        if (out.known_bits.test(v)) continue;
        const auto& in = g.in_edges[v];
        for (std::size_t i = 0; i < in.size(); ++i) {
            VertexId u = g.edges[in[i]].src;
            if (out.known_bits.test(u))
                base_mask[v] |= std::uint64_t{1} << i;
            else {
                surviving_pos[v].push_back(static_cast<int>(i));
                kept.push_back(g.edges[in[i]]);
            }
        }
    }
    std::map<VertexId, std::int64_t> weights;
    for (VertexId v = 0; v < g.n; ++v)
        if (g.vertex_weight[v] != 1) weights[v] = g.vertex_weight[v];
    WeightedDigraph reduced_graph = build_graph(g.n, weights, kept);

    std::vector<LocalInfluence> local(g.n);
    for (VertexId v = 0; v < g.n; ++v) {
        if (out.known_bits.test(v)) {
            local[v] = LocalInfluence([](std::uint64_t) { return 0.0; });
            continue;
        }
        double c = levels.level[v];
        local[v] = LocalInfluence([f = m.local[v], base = base_mask[v], pos = surviving_pos[v],
                                   c](std::uint64_t mask) {
            std::uint64_t old_mask = base;
            for (std::size_t j = 0; j < pos.size(); ++j)
                if (mask & (std::uint64_t{1} << j)) old_mask |= std::uint64_t{1} << pos[j];
            double val = (f(old_mask) - c) / (1.0 - c);
            return std::clamp(val, 0.0, 1.0);
        });
    }
    out.reduced = make_gtm_model(std::move(reduced_graph), std::move(local), m.candidates);
    return out;
}

}  // namespace gapbench
