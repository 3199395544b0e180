#include "gapbench/exact.hpp"

#include <deque>
#include <string>

#include "gapbench/graph.hpp"

namespace gapbench {

template <class Num>
Num ExactEngine<Num>::edge_weight(int eid) const {
    if constexpr (std::is_same_v<Num, Rational>) {
        if (exact_weights_) return (*exact_weights_)[eid];
        return rational_from_double(m_.graph.edges[eid].weight);
    } else {
        return m_.graph.edges[eid].weight;
    }
}

template <class Num>
ExactEngine<Num>::ExactEngine(const ModelSpec& m, const PartialRealization* partial,
                              const std::vector<Rational>* exact_weights, const Bits* reach_from,
                              bool include_seed_target_axes, const ExactOptions& opt)
    : m_(m), exact_weights_(exact_weights) {
    if (!m.is_triggering()) throw WrongModelKind("exact enumeration requires a triggering model");
    const WeightedDigraph& g = m.graph;
    live_.assign(g.edge_count(), 0);

    auto known_blocked = [&](int eid) { return partial != nullptr && partial->blocked(eid); };
    auto known_live = [&](int eid) { return partial != nullptr && partial->live(eid); };
    auto unknown = [&](int eid) { return partial == nullptr || !partial->known(eid); };

    // revealed-live edges stay live in every enumerated assignment
    for (int e = 0; e < g.edge_count(); ++e)
        if (known_live(e)) live_[e] = 1;

    if (reach_from == nullptr) {
        universe_ = Bits(g.n);
        for (int v = 0; v < g.n; ++v) universe_.set(v);
    } else {
        universe_ = *reach_from;
        std::deque<VertexId> frontier;
        universe_.for_each([&](int v) { frontier.push_back(v); });
        while (!frontier.empty()) {
            VertexId u = frontier.front();
            frontier.pop_front();
            for (int eid : g.out_edges[u]) {
                if (known_blocked(eid)) continue;
                VertexId w = g.edges[eid].dst;
                if (!universe_.test(w)) {
                    universe_.set(w);
                    frontier.push_back(w);
                }
            }
        }
    }

    const Num one = NumOps<Num>::from_int(1);
    const Num zero = NumOps<Num>::from_int(0);
    for (VertexId v = 0; v < g.n; ++v) {
        if (!universe_.test(v)) continue;
        if (!include_seed_target_axes && reach_from != nullptr && reach_from->test(v))
            continue;  // in-edge statuses of a seed never influence anything
        const auto& in = g.in_edges[v];
        if (in.empty()) continue;

        if (m.label_of(v) == VertexLabel::IC) {
            for (int eid : in) {
                if (!unknown(eid) || !universe_.test(g.edges[eid].src)) continue;
                Num w = edge_weight(eid);
                if (w == one) {
                    live_[eid] = 1;
                    continue;
                }
                Axis ax;
                ax.edges = {eid};
                ax.options.push_back({1u, w});
                ax.options.push_back({0u, one - w});
                axes_.push_back(std::move(ax));
            }
        } else {
            bool has_live = false;
            Num blocked_sum = zero;
            for (int eid : in) {
                if (known_live(eid)) has_live = true;
                if (known_blocked(eid)) blocked_sum = blocked_sum + edge_weight(eid);
            }
            if (has_live) continue;  // trigger determined, siblings stay blocked
            Num denom = one - blocked_sum;
            if (!(denom > zero) || NumOps<Num>::to_double(denom) < 1e-15)
                throw InconsistentPartial("no remaining triggering mass at LT vertex " +
                                          std::to_string(v));
            Axis ax;
            Num in_universe_mass = zero;
            for (int eid : in) {
                if (!unknown(eid) || !universe_.test(g.edges[eid].src)) continue;
                Num p = edge_weight(eid) / denom;
                if (p == zero) continue;
                ax.options.push_back({std::uint32_t{1} << ax.edges.size(), p});
                ax.edges.push_back(eid);
                in_universe_mass = in_universe_mass + p;
            }
            Num lump = one - in_universe_mass;  // no trigger among reachable sources
            if (lump > zero) ax.options.push_back({0u, lump});
            if (ax.edges.empty()) continue;
            if (ax.options.size() == 1) {
                for (std::size_t j = 0; j < ax.edges.size(); ++j)
                    live_[ax.edges[j]] = (ax.options[0].live_mask >> j) & 1;
                continue;
            }
            axes_.push_back(std::move(ax));
        }
    }

    for (const Axis& ax : axes_) {
        state_count_ *= static_cast<double>(ax.options.size());
        if (state_count_ > opt.max_states)
            throw TooLargeToEnumerate("realization space exceeds cap of " +
                                      std::to_string(static_cast<long long>(opt.max_states)));
    }
}

template <class Num>
Bits ExactEngine<Num>::closure(const Bits& seeds) const {
    const WeightedDigraph& g = m_.graph;
    Bits infected = seeds;
    std::deque<VertexId> frontier;
    seeds.for_each([&](int v) { frontier.push_back(v); });
    while (!frontier.empty()) {
        VertexId u = frontier.front();
        frontier.pop_front();
        for (int eid : g.out_edges[u]) {
            if (!live_[eid]) continue;
            VertexId w = g.edges[eid].dst;
            if (!infected.test(w)) {
                infected.set(w);
                frontier.push_back(w);
            }
        }
    }
    return infected;
}

template <class Num>
Num ExactEngine<Num>::sigma(const Bits& seeds) {
    Num total = NumOps<Num>::from_int(0);
    for_each([&](const Num& prob) {
        total = total + prob * NumOps<Num>::from_int(total_weight(m_.graph, closure(seeds)));
    });
    return total;
}

template class ExactEngine<double>;
template class ExactEngine<Rational>;

}  // namespace gapbench
