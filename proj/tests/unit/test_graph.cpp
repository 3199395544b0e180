#include <doctest.h>

#include "gapbench/errors.hpp"
#include "gapbench/evaluate.hpp"
#include "gapbench/graph.hpp"
#include "gapbench/model.hpp"

using namespace gapbench;

TEST_SUITE("graph") {

TEST_CASE("build_graph validates and indexes") {
    WeightedDigraph g = build_graph(2, {}, {{0, 1, 0.5}});
    CHECK(g.in_degree(1) == 1);
    CHECK(g.out_degree(0) == 1);
    CHECK(g.vertex_weight[0] == 1);

    CHECK_THROWS_AS(build_graph(3, {}, {{0, 1, 1.0}, {0, 1, 0.5}}), DuplicateEdge);
    CHECK_THROWS_AS(build_graph(1, {}, {{0, 0, 1.0}}), SelfLoop);
    CHECK_THROWS_AS(build_graph(2, {}, {{0, 1, 1.5}}), WeightOutOfRange);
    CHECK_THROWS_AS(build_graph(2, {}, {{0, 1, 0.0}}), WeightOutOfRange);
    CHECK_THROWS_AS(build_graph(2, {}, {{0, 5, 1.0}}), BadVertexId);
    CHECK_THROWS_AS(build_graph(2, {{0, 0}}, {}), WeightOutOfRange);
}

TEST_CASE("adjacency indexes agree with the edge list") {
    WeightedDigraph g = build_graph(4, {}, {{0, 1, 0.5}, {0, 2, 0.25}, {2, 1, 1.0}, {3, 2, 0.75}});
    int counted = 0;
    for (VertexId v = 0; v < g.n; ++v) {
        for (int eid : g.in_edges[v]) CHECK(g.edges[eid].dst == v);
        for (int eid : g.out_edges[v]) CHECK(g.edges[eid].src == v);
        counted += g.in_degree(v);
    }
    CHECK(counted == g.edge_count());
}

TEST_CASE("total_weight") {
    WeightedDigraph g = build_graph(5, {}, {});
    CHECK(total_weight(g, std::vector<VertexId>{}) == 0);
    CHECK(total_weight(g, std::vector<VertexId>{0, 1, 2, 3, 4}) == 5);
    CHECK(total_weight(g, std::vector<VertexId>{1, 1, 2}) == 2);  // duplicates count once
    CHECK_THROWS_AS(total_weight(g, std::vector<VertexId>{7}), BadVertexId);
}

TEST_CASE("total_weight on the worst-case ICM construction") {
    // k=2, W=1600: s has weight 2W
    WeightedDigraph g = build_graph(2, {{0, 3200}, {1, 20}}, {{0, 1, 0.1}});
    CHECK(total_weight(g, std::vector<VertexId>{0}) == 3200);
}

TEST_CASE("weight gadget: identity on unit weights") {
    WeightedDigraph g = build_graph(3, {}, {{0, 1, 0.5}, {1, 2, 0.5}});
    WeightedDigraph e = expand_weight_gadget(g);
    CHECK(e.n == g.n);
    CHECK(e.edge_count() == g.edge_count());
}

TEST_CASE("weight gadget: single vertex of weight 3") {
    WeightedDigraph g = build_graph(1, {{0, 3}}, {});
    WeightedDigraph e = expand_weight_gadget(g);
    CHECK(e.n == 3);
    CHECK(e.edge_count() == 2);
    for (const Edge& ed : e.edges) {
        CHECK(ed.src == 0);
        CHECK(ed.weight == 1.0);
    }
    for (auto w : e.vertex_weight) CHECK(w == 1);
}

TEST_CASE("weight gadget preserves total vertex weight and is idempotent") {
    WeightedDigraph g = build_graph(3, {{0, 4}, {2, 2}}, {{0, 1, 0.5}, {1, 2, 1.0}});
    std::int64_t before = 0;
    for (auto w : g.vertex_weight) before += w;
    WeightedDigraph e = expand_weight_gadget(g);
    CHECK(e.n == before);
    WeightedDigraph e2 = expand_weight_gadget(e);
    CHECK(e2.n == e.n);
    CHECK(e2.edge_count() == e.edge_count());
}

TEST_CASE("weight gadget preserves sigma (enumeration oracle on both graphs)") {
    // ICM vertex of weight 2, seed {v}: sigma = 2 under both representations
    WeightedDigraph g = build_graph(1, {{0, 2}}, {});
    ModelSpec native = make_model(g, ModelKind::ICM);
    ModelSpec expanded = make_model(expand_weight_gadget(g), ModelKind::ICM);
    CHECK(sigma_exact(native, {0}) == doctest::Approx(2.0));
    CHECK(sigma_exact(expanded, {0}) == doctest::Approx(2.0));

    // a random weighted graph, all seed sets over original vertices
    WeightedDigraph h =
        build_graph(3, {{1, 3}, {2, 2}}, {{0, 1, 0.5}, {1, 2, 0.25}, {0, 2, 0.75}});
    for (ModelKind kind : {ModelKind::ICM, ModelKind::LTM}) {
        ModelSpec mn = make_model(h, kind);
        ModelSpec mx = make_model(expand_weight_gadget(h), kind);
        for (std::uint32_t s = 0; s < 8; ++s) {
            std::vector<VertexId> seeds;
            for (VertexId v = 0; v < 3; ++v)
                if (s & (1u << v)) seeds.push_back(v);
            CHECK(sigma_exact(mn, seeds) == doctest::Approx(sigma_exact(mx, seeds)));
        }
    }
}

}  // TEST_SUITE
