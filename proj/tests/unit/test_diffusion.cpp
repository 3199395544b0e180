#include <doctest.h>

#include <algorithm>

#include "gapbench/diffusion.hpp"
#include "gapbench/errors.hpp"
#include "gapbench/evaluate.hpp"
#include "gapbench/instances.hpp"

using namespace gapbench;

namespace {

ModelSpec single_edge(double w, ModelKind kind) {
    return make_model(build_graph(2, {}, {{0, 1, w}}), kind);
}

}  // namespace

TEST_SUITE("diffusion") {

TEST_CASE("probability-1 edge is always live") {
    ModelSpec m = single_edge(1.0, ModelKind::ICM);
    RngStream rng(7, 0);
    for (int i = 0; i < 200; ++i) CHECK(sample_realization(m, rng).live(0));
}

TEST_CASE("IC edge live frequency matches its weight") {
    ModelSpec m = single_edge(0.5, ModelKind::ICM);
    RngStream rng(11, 0);
    int live = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) live += sample_realization(m, rng).live(0) ? 1 : 0;
    double freq = static_cast<double>(live) / n;
    double se = std::sqrt(0.25 / n);
    CHECK(std::abs(freq - 0.5) <= 3 * se);
}

TEST_CASE("LT vertex with in-weights 0.3/0.3 has no live in-edge with probability 0.4") {
    ModelSpec m = make_model(build_graph(3, {}, {{0, 2, 0.3}, {1, 2, 0.3}}), ModelKind::LTM);
    RngStream rng(13, 0);
    int none = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        Realization phi = sample_realization(m, rng);
        CHECK(!(phi.live(0) && phi.live(1)));  // at most one
        none += (!phi.live(0) && !phi.live(1)) ? 1 : 0;
    }
    double freq = static_cast<double>(none) / n;
    double se = std::sqrt(0.4 * 0.6 / n);
    CHECK(std::abs(freq - 0.4) <= 3 * se);
}

TEST_CASE("LT vertices never get two live in-edges") {
    GeneratedInstance inst = gen_random(8, 0.4, ModelKind::Mixture, RngStream(17, 0));
    RngStream rng(19, 0);
    for (int it = 0; it < 500; ++it) {
        Realization phi = sample_realization(inst.model, rng);
        for (VertexId v = 0; v < inst.model.graph.n; ++v) {
            if (inst.model.label_of(v) != VertexLabel::LT) continue;
            int live = 0;
            for (int eid : inst.model.graph.in_edges[v]) live += phi.live(eid) ? 1 : 0;
            REQUIRE(live <= 1);
        }
    }
}

TEST_CASE("cascade follows live edges only") {
    ModelSpec m = make_model(build_graph(3, {}, {{0, 1, 0.5}, {1, 2, 0.5}}), ModelKind::ICM);
    Realization all_live{{EdgeStatus::Live, EdgeStatus::Live}};
    Realization cut{{EdgeStatus::Live, EdgeStatus::Blocked}};
    CHECK(cascade(m, all_live, {}).empty());
    CHECK(cascade(m, all_live, {0}) == std::vector<VertexId>{0, 1, 2});
    CHECK(cascade(m, cut, {0}) == std::vector<VertexId>{0, 1});
}

TEST_CASE("cascade is monotone in the seed set and order-invariant") {
    GeneratedInstance inst = gen_random(8, 0.35, ModelKind::ICM, RngStream(23, 0));
    RngStream rng(29, 0);
    for (int it = 0; it < 100; ++it) {
        Realization phi = sample_realization(inst.model, rng);
        std::vector<VertexId> small{1, 3}, big{3, 5, 1, 0};
        auto a = cascade(inst.model, phi, small);
        auto b = cascade(inst.model, phi, big);
        CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
        std::vector<VertexId> shuffled{0, 1, 5, 3};
        CHECK(cascade(inst.model, phi, shuffled) == b);
    }
    // permuting the edge list does not change cascades
    WeightedDigraph g = inst.model.graph;
    std::vector<Edge> rev(g.edges.rbegin(), g.edges.rend());
    ModelSpec m2 = make_model(build_graph(g.n, {}, rev), ModelKind::ICM);
    RngStream r1(31, 0);
    for (int it = 0; it < 50; ++it) {
        Realization phi1 = sample_realization(inst.model, r1);
        Realization phi2;
        phi2.status.assign(m2.graph.edge_count(), EdgeStatus::Blocked);
        for (int e = 0; e < g.edge_count(); ++e)
            phi2.status[g.edge_count() - 1 - e] = phi1.status[e];
        CHECK(cascade(inst.model, phi1, {0, 2}) == cascade(m2, phi2, {2, 0}));
    }
}

TEST_CASE("thresholds are uniform on (0,1] and reproducible") {
    GeneratedInstance base = gen_random(5, 0.3, ModelKind::ICM, RngStream(37, 0));
    ModelSpec gtm = lift_to_gtm(base.model);
    RngStream rng(41, 0);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        RngStream r = rng.derive(i);
        ThresholdRealization t = sample_thresholds(gtm, r);
        sum += t.theta[0];
        if (i < 100)
            for (double x : t.theta) {
                CHECK(x > 0.0);
                CHECK(x <= 1.0);
            }
    }
    double se = std::sqrt(1.0 / 12.0 / n);
    CHECK(std::abs(sum / n - 0.5) <= 3 * se);

    RngStream a(5, 9), b(5, 9);
    CHECK(sample_thresholds(gtm, a).theta == sample_thresholds(gtm, b).theta);
}

TEST_CASE("gtm_cascade threshold crossing on a single edge") {
    ModelSpec gtm = lift_to_gtm(single_edge(0.6, ModelKind::ICM));
    ThresholdRealization low{{0.5, 0.5}};
    ThresholdRealization high{{0.5, 0.7}};
    CHECK(gtm_cascade(gtm, low, {}).empty());
    CHECK(gtm_cascade(gtm, low, {0}) == std::vector<VertexId>{0, 1});
    CHECK(gtm_cascade(gtm, high, {0}) == std::vector<VertexId>{0});
}

TEST_CASE("gtm single-edge infection probability equals the edge weight") {
    for (ModelKind kind : {ModelKind::ICM, ModelKind::LTM}) {
        ModelSpec gtm = lift_to_gtm(single_edge(0.35, kind));
        EstimateCI e = sigma_mc(gtm, {0}, 100000, RngStream(43, 0));
        CHECK(std::abs(e.mean - 1.35) <= 3 * e.std_error());
    }
}

TEST_CASE("gtm with LT-form locals matches the triggering LTM estimator") {
    GeneratedInstance inst = gen_random(6, 0.4, ModelKind::LTM, RngStream(47, 0));
    ModelSpec gtm = lift_to_gtm(inst.model);
    EstimateCI via_triggering = sigma_mc(inst.model, {0, 1}, 100000, RngStream(53, 0));
    EstimateCI via_gtm = sigma_mc(gtm, {0, 1}, 100000, RngStream(59, 0));
    CHECK(via_triggering.overlaps(via_gtm));
}

TEST_CASE("original ICM process agrees with the triggering formulation") {
    ModelSpec m = make_model(
        build_graph(5, {}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 3, 1.0}, {3, 4, 1.0}}), ModelKind::ICM);
    RngStream rng(61, 0);
    CHECK(original_icm_process(m, {}, rng).empty());
    CHECK(original_icm_process(m, {0}, rng).size() == 5);  // deterministic DAG

    GeneratedInstance inst = gen_random(5, 0.45, ModelKind::ICM, RngStream(67, 0));
    std::vector<double> direct;
    RngStream r1(71, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        RngStream r = r1.derive(i);
        direct.push_back(static_cast<double>(
            total_weight(inst.model.graph, make_vertex_set(inst.model.graph.n,
                                                           original_icm_process(inst.model, {0, 2}, r)))));
    }
    EstimateCI a = make_estimate(direct, 71);
    EstimateCI b = sigma_mc(inst.model, {0, 2}, n, RngStream(73, 0));
    CHECK(a.overlaps(b));
}

TEST_CASE("original LTM process agrees with the triggering formulation") {
    ModelSpec m = single_edge(1.0, ModelKind::LTM);
    RngStream rng(79, 0);
    for (int i = 0; i < 100; ++i) {
        RngStream r = rng.derive(i);
        CHECK(original_ltm_process(m, {0}, r).size() == 2);
    }

    GeneratedInstance inst = gen_random(5, 0.45, ModelKind::LTM, RngStream(83, 0));
    std::vector<double> direct;
    RngStream r1(89, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        RngStream r = r1.derive(i);
        direct.push_back(static_cast<double>(
            total_weight(inst.model.graph, make_vertex_set(inst.model.graph.n,
                                                           original_ltm_process(inst.model, {0, 2}, r)))));
    }
    EstimateCI a = make_estimate(direct, 89);
    EstimateCI b = sigma_mc(inst.model, {0, 2}, n, RngStream(97, 0));
    CHECK(a.overlaps(b));
}

TEST_CASE("model-kind guards") {
    ModelSpec icm = single_edge(0.5, ModelKind::ICM);
    ModelSpec ltm = single_edge(0.5, ModelKind::LTM);
    ModelSpec gtm = lift_to_gtm(icm);
    RngStream rng(101, 0);
    CHECK_THROWS_AS(sample_realization(gtm, rng), WrongModelKind);
    CHECK_THROWS_AS(sample_thresholds(icm, rng), WrongModelKind);
    CHECK_THROWS_AS(original_icm_process(ltm, {0}, rng), WrongModelKind);
    CHECK_THROWS_AS(original_ltm_process(icm, {0}, rng), WrongModelKind);
    ThresholdRealization t{{0.5, 0.5}};
    CHECK_THROWS_AS(gtm_cascade(icm, t, {0}), WrongModelKind);
}

}  // TEST_SUITE
