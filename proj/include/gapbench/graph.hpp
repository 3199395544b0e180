#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gapbench/bits.hpp"

namespace gapbench {

using VertexId = std::int32_t;

struct Edge {
    VertexId src;
    VertexId dst;
    double weight;  // in (0,1]
};

// Directed simple graph with positive integer vertex weights.  Immutable
// after build_graph; safe to share across threads.
struct WeightedDigraph {
    int n = 0;
    std::vector<std::int64_t> vertex_weight;  // default 1, always >= 1
    std::vector<Edge> edges;
    std::vector<std::vector<int>> in_edges;   // vertex -> edge ids
    std::vector<std::vector<int>> out_edges;  // vertex -> edge ids

    int edge_count() const { return static_cast<int>(edges.size()); }
    int in_degree(VertexId v) const { return static_cast<int>(in_edges[v].size()); }
    int out_degree(VertexId v) const { return static_cast<int>(out_edges[v].size()); }
};

// Validates and indexes.  Throws DuplicateEdge, SelfLoop, WeightOutOfRange,
// BadVertexId.
WeightedDigraph build_graph(int n, const std::map<VertexId, std::int64_t>& vertex_weights,
                            const std::vector<Edge>& edges);

// Replaces every vertex of weight W > 1 by a unit-weight vertex with W-1
// pendant out-neighbors attached by weight-1 edges.  The weighted objective
// of the input equals the unweighted objective of the output for any seed
// set over the original vertices.
WeightedDigraph expand_weight_gadget(const WeightedDigraph& g);

std::int64_t total_weight(const WeightedDigraph& g, const std::vector<VertexId>& s);
std::int64_t total_weight(const WeightedDigraph& g, const Bits& s);

Bits make_vertex_set(int n, const std::vector<VertexId>& vs);

}  // namespace gapbench
