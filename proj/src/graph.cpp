#include "gapbench/graph.hpp"

#include <set>
#include <string>

#include "gapbench/errors.hpp"

namespace gapbench {

WeightedDigraph build_graph(int n, const std::map<VertexId, std::int64_t>& vertex_weights,
                            const std::vector<Edge>& edges) {
    if (n < 0) throw BadVertexId("vertex count must be non-negative");
    WeightedDigraph g;
    g.n = n;
    g.vertex_weight.assign(n, 1);
    for (const auto& [v, w] : vertex_weights) {
        if (v < 0 || v >= n) throw BadVertexId("vertex weight for out-of-range id " + std::to_string(v));
        if (w < 1) throw WeightOutOfRange("vertex weight must be a positive integer");
        g.vertex_weight[v] = w;
    }
    g.in_edges.assign(n, {});
    g.out_edges.assign(n, {});
    std::set<std::pair<VertexId, VertexId>> seen;
    for (const Edge& e : edges) {
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
            throw BadVertexId("edge endpoint out of range");
        if (e.src == e.dst) throw SelfLoop("self-loop at vertex " + std::to_string(e.src));
        if (!(e.weight > 0.0) || e.weight > 1.0)
            throw WeightOutOfRange("edge weight must lie in (0,1]");
        if (!seen.insert({e.src, e.dst}).second)
            throw DuplicateEdge("duplicate edge " + std::to_string(e.src) + "->" + std::to_string(e.dst));
        int id = static_cast<int>(g.edges.size());
        g.edges.push_back(e);
        g.out_edges[e.src].push_back(id);
        g.in_edges[e.dst].push_back(id);
    }
    return g;
}

WeightedDigraph expand_weight_gadget(const WeightedDigraph& g) {
    std::int64_t extra = 0;
    for (auto w : g.vertex_weight) extra += w - 1;
    std::map<VertexId, std::int64_t> unit_weights;  // all ones
    std::vector<Edge> edges = g.edges;
    int next = g.n;
    for (VertexId v = 0; v < g.n; ++v) {
        for (std::int64_t i = 1; i < g.vertex_weight[v]; ++i) {
            edges.push_back({v, next, 1.0});
            ++next;
        }
    }
    return build_graph(g.n + static_cast<int>(extra), unit_weights, edges);
}

std::int64_t total_weight(const WeightedDigraph& g, const std::vector<VertexId>& s) {
    Bits seen(g.n);
    std::int64_t sum = 0;
    for (VertexId v : s) {
        if (v < 0 || v >= g.n) throw BadVertexId("vertex id out of range: " + std::to_string(v));
        if (seen.test(v)) continue;
        seen.set(v);
        sum += g.vertex_weight[v];
    }
    return sum;
}

std::int64_t total_weight(const WeightedDigraph& g, const Bits& s) {
    std::int64_t sum = 0;
    s.for_each([&](int v) { sum += g.vertex_weight[v]; });
    return sum;
}

Bits make_vertex_set(int n, const std::vector<VertexId>& vs) {
    Bits b(n);
    for (VertexId v : vs) {
        if (v < 0 || v >= n) throw BadVertexId("vertex id out of range: " + std::to_string(v));
        b.set(v);
    }
    return b;
}

}  // namespace gapbench
