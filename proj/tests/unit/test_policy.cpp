#include <doctest.h>

#include <cmath>

#include "gapbench/diffusion.hpp"
#include "gapbench/errors.hpp"
#include "gapbench/instances.hpp"
#include "gapbench/policy.hpp"

using namespace gapbench;

namespace {

EvalOptions exact_eval() {
    EvalOptions e;
    e.mode = EvalMode::Exact;
    return e;
}

Realization tight_realization(const ModelSpec& m, bool st_live) {
    // weight-1 edges live; (s,t) as requested; LT v-columns triggered by u_1
    Realization phi;
    phi.status.assign(m.graph.edge_count(), EdgeStatus::Blocked);
    for (int e = 0; e < m.graph.edge_count(); ++e) {
        const Edge& ed = m.graph.edges[e];
        if (ed.src == 0 && ed.dst == 1) {
            phi.status[e] = st_live ? EdgeStatus::Live : EdgeStatus::Blocked;
        } else if (m.label_of(ed.dst) == VertexLabel::IC) {
            if (ed.weight == 1.0) phi.status[e] = EdgeStatus::Live;
        } else if (ed.dst == 1) {
            phi.status[e] = st_live ? EdgeStatus::Blocked : EdgeStatus::Live;  // (v_1,t)
        } else if (ed.src == 2) {
            phi.status[e] = EdgeStatus::Live;  // LT columns triggered by u_1
        }
    }
    return phi;
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("greedy on an edgeless unit-weight graph breaks ties by id") {
    ModelSpec m = make_model(build_graph(5, {}, {}), ModelKind::ICM);
    GreedyOrder o = greedy_nonadaptive(m, 2, exact_eval());
    CHECK(o.order == std::vector<VertexId>{0, 1});
    CHECK(o.marginal_at_pick[0] == doctest::Approx(1.0));
}

TEST_CASE("greedy picks a dominant root first") {
    ModelSpec m = make_model(
        build_graph(4, {{3, 10}}, {{3, 0, 0.5}, {3, 1, 0.5}, {0, 2, 0.5}}), ModelKind::ICM);
    GreedyOrder o = greedy_nonadaptive(m, 1, exact_eval());
    CHECK(o.order == std::vector<VertexId>{3});
}

TEST_CASE("greedy reproduces the worst-case trajectory {s, u_1, u_2}") {
    for (bool ltm : {false, true}) {
        GeneratedInstance inst = ltm ? gen_ltm_tight(2, 1600, false) : gen_icm_tight(2, 1600);
        GreedyOrder o = greedy_nonadaptive(inst.model, 3, exact_eval());
        CHECK(o.order == std::vector<VertexId>{0, 2, 3});
    }
}

TEST_CASE("greedy respects prescribed candidates and rejects k over budget") {
    ModelSpec m = make_model(build_graph(5, {{0, 50}}, {}), ModelKind::ICM, {}, {2, 3});
    GreedyOrder o = greedy_nonadaptive(m, 2, exact_eval());
    CHECK(o.order == std::vector<VertexId>{2, 3});
    CHECK_THROWS_AS(greedy_nonadaptive(m, 3, exact_eval()), NotEnoughCandidates);
}

TEST_CASE("Monte Carlo greedy with common random numbers matches exact greedy") {
    GeneratedInstance inst = gen_random(7, 0.35, ModelKind::Mixture, RngStream(181, 0));
    GreedyOrder exact = greedy_nonadaptive(inst.model, 3, exact_eval());
    EvalOptions mc;
    mc.mode = EvalMode::MonteCarlo;
    mc.samples = 20000;
    mc.rng = RngStream(191, 0);
    GreedyOrder sampled = greedy_nonadaptive(inst.model, 3, mc);
    CHECK(sampled.order == exact.order);
}

TEST_CASE("first adaptive pick equals the first non-adaptive pick") {
    for (int i = 0; i < 6; ++i) {
        GeneratedInstance inst = gen_random(7, 0.3, ModelKind::Mixture, RngStream(4000 + i, 0));
        PartialRealization blank =
            PartialRealization::all_unknown(inst.model.graph.edge_count());
        VertexId adaptive = adaptive_greedy_step(inst.model, {}, blank, exact_eval());
        CHECK(adaptive == greedy_nonadaptive(inst.model, 1, exact_eval()).order[0]);
    }
}

TEST_CASE("adaptive pick on the worst-case ICM instance branches on t") {
    GeneratedInstance inst = gen_icm_tight(2, 1600);
    int st = -1;
    for (int e = 0; e < inst.model.graph.edge_count(); ++e)
        if (inst.model.graph.edges[e].src == 0 && inst.model.graph.edges[e].dst == 1) st = e;
    PartialRealization blocked = PartialRealization::all_unknown(inst.model.graph.edge_count());
    blocked.status[st] = PartialStatus::Blocked;
    CHECK(adaptive_greedy_step(inst.model, {0}, blocked, exact_eval()) == 4);  // v_1
    PartialRealization live = blocked;
    live.status[st] = PartialStatus::Live;
    CHECK(adaptive_greedy_step(inst.model, {0}, live, exact_eval()) == 2);  // u_1
}

TEST_CASE("risk-free step skips vertices known to be infected") {
    ModelSpec m = make_model(build_graph(3, {}, {{0, 1, 0.5}, {1, 2, 0.5}}), ModelKind::ICM);
    GreedyOrder order;
    order.order = {0, 1, 2};
    PartialRealization blank = PartialRealization::all_unknown(2);
    CHECK(risk_free_step(m, order, {}, blank) == 0);
    PartialRealization p = blank;
    p.status[0] = PartialStatus::Live;  // 1 infected after seeding 0
    CHECK(risk_free_step(m, order, {0}, p) == 2);
    p.status[1] = PartialStatus::Live;  // everything infected
    CHECK_THROWS_AS(risk_free_step(m, order, {0}, p), AllKnownInfected);
}

TEST_CASE("risk-free equals non-adaptive greedy on an edgeless graph") {
    ModelSpec m = make_model(build_graph(4, {{2, 7}}, {}), ModelKind::ICM);
    GreedyOrder order = greedy_nonadaptive(m, 4, exact_eval());
    Realization phi;  // no edges
    PolicyRun run = run_policy(m, Policy::risk_free(order), 3, FeedbackKind::FullAdoption, phi,
                               exact_eval());
    GreedyOrder g = greedy_nonadaptive(m, 3, exact_eval());
    CHECK(run.seeds_in_order == g.order);
}

TEST_CASE("run_policy with a fixed list reproduces the cascade") {
    GeneratedInstance inst = gen_random(7, 0.35, ModelKind::ICM, RngStream(193, 0));
    RngStream rng(197, 0);
    Realization phi = sample_realization(inst.model, rng);
    PolicyRun run = run_policy(inst.model, Policy::fixed_list({1, 4}), 2,
                               FeedbackKind::Myopic, phi, exact_eval());
    CHECK(run.seeds_in_order == std::vector<VertexId>{1, 4});
    CHECK(run.infected == cascade(inst.model, phi, {1, 4}));
    CHECK(run.objective ==
          doctest::Approx(static_cast<double>(total_weight(
              inst.model.graph, make_vertex_set(inst.model.graph.n, run.infected)))));
    REQUIRE(run.snapshots.size() == 2);
    // snapshot i is the feedback of the first i+1 seeds
    PartialRealization expect = myopic_feedback(inst.model, phi, {1});
    CHECK(run.snapshots[0].status == expect.status);
}

TEST_CASE("adaptive greedy run on the tight instances follows the proof branches") {
    GeneratedInstance inst = gen_icm_tight(2, 1600);
    for (FeedbackKind fb : {FeedbackKind::FullAdoption, FeedbackKind::Myopic}) {
        Realization blocked = tight_realization(inst.model, false);
        PolicyRun r1 = run_policy(inst.model, Policy::adaptive_greedy(), 3, fb, blocked,
                                  exact_eval());
        CHECK(r1.seeds_in_order == std::vector<VertexId>{0, 4, 5});  // s, v_1, v_2
        Realization live = tight_realization(inst.model, true);
        PolicyRun r2 = run_policy(inst.model, Policy::adaptive_greedy(), 3, fb, live,
                                  exact_eval());
        CHECK(r2.seeds_in_order == std::vector<VertexId>{0, 2, 3});  // s, u_1, u_2
    }
}

TEST_CASE("sigma_adaptive of a fixed policy matches sigma_mc") {
    GeneratedInstance inst = gen_random(7, 0.3, ModelKind::Mixture, RngStream(199, 0));
    EstimateCI via_policy = sigma_adaptive(inst.model, Policy::fixed_list({0, 3}), 2,
                                           FeedbackKind::FullAdoption, 50000, RngStream(211, 0),
                                           exact_eval());
    EstimateCI direct = sigma_mc(inst.model, {0, 3}, 50000, RngStream(223, 0));
    CHECK(via_policy.overlaps(direct));

    ModelSpec edgeless = make_model(build_graph(5, {}, {}), ModelKind::ICM);
    EstimateCI flat = sigma_adaptive(edgeless, Policy::adaptive_greedy(), 3,
                                     FeedbackKind::FullAdoption, 100, RngStream(227, 0),
                                     exact_eval());
    CHECK(flat.mean == doctest::Approx(3.0));
    CHECK(flat.half_width == doctest::Approx(0.0));
}

TEST_CASE("exact adaptive value of a fixed policy equals sigma_exact") {
    GeneratedInstance inst = gen_random(6, 0.4, ModelKind::Mixture, RngStream(229, 0));
    double a = sigma_adaptive_exact(inst.model, Policy::fixed_list({0, 2}), 2,
                                    FeedbackKind::FullAdoption);
    CHECK(a == doctest::Approx(sigma_exact(inst.model, {0, 2})));
    double b = sigma_adaptive_exact(inst.model, Policy::fixed_list({0, 2}), 2,
                                    FeedbackKind::Myopic);
    CHECK(b == doctest::Approx(sigma_exact(inst.model, {0, 2})));
}

TEST_CASE("Monte Carlo sigma_adaptive agrees with the exact adaptive value") {
    GeneratedInstance inst = gen_icm_tight(2, 400);
    double exact = sigma_adaptive_exact(inst.model, Policy::adaptive_greedy(), 3,
                                        FeedbackKind::FullAdoption);
    EvalOptions inner = exact_eval();  // exact marginals inside each sampled run
    EstimateCI mc = sigma_adaptive(inst.model, Policy::adaptive_greedy(), 3,
                                   FeedbackKind::FullAdoption, 20000, RngStream(233, 0), inner);
    CHECK(std::abs(mc.mean - exact) <= 3 * mc.std_error());
}

TEST_CASE("optimal non-adaptive oracle") {
    ModelSpec edgeless = make_model(build_graph(5, {}, {}), ModelKind::ICM);
    auto [seeds, value] = optimal_nonadaptive_exact(edgeless, 3);
    CHECK(value == doctest::Approx(3.0));

    ModelSpec star = make_model(
        build_graph(4, {{3, 10}}, {{3, 0, 0.5}, {3, 1, 0.5}}), ModelKind::ICM);
    auto [s2, v2] = optimal_nonadaptive_exact(star, 1);
    CHECK(s2 == std::vector<VertexId>{3});

    ExactOptions few;
    few.max_subsets = 2;
    CHECK_THROWS_AS(optimal_nonadaptive_exact(edgeless, 2, few), TooLargeToEnumerate);
}

TEST_CASE("greedy achieves at least (1 - 1/e) of the non-adaptive optimum") {
    const double factor = 1.0 - 1.0 / std::exp(1.0);
    for (int i = 0; i < 20; ++i) {
        GeneratedInstance inst = gen_random(7, 0.25, i % 2 ? ModelKind::LTM : ModelKind::ICM,
                                            RngStream(5000 + i, 0));
        if (inst.model.graph.edge_count() > 10) continue;
        GreedyOrder g = greedy_nonadaptive(inst.model, 2, exact_eval());
        double greedy_value = sigma_exact(inst.model, g.order);
        double best = optimal_nonadaptive_exact(inst.model, 2).second;
        CHECK(greedy_value >= factor * best - 1e-9);
        CHECK(best >= greedy_value - 1e-9);
    }
}

TEST_CASE("optimal adaptive oracle dominates") {
    ModelSpec edgeless = make_model(build_graph(4, {}, {}), ModelKind::ICM);
    CHECK(optimal_adaptive_exact(edgeless, 2, FeedbackKind::FullAdoption) ==
          doctest::Approx(2.0));

    for (int i = 0; i < 20; ++i) {
        GeneratedInstance inst = gen_random(6, 0.25, i % 2 ? ModelKind::LTM : ModelKind::ICM,
                                            RngStream(6000 + i, 0));
        if (inst.model.graph.edge_count() > 6) continue;
        for (FeedbackKind fb : {FeedbackKind::FullAdoption, FeedbackKind::Myopic}) {
            double oa = optimal_adaptive_exact(inst.model, 2, fb);
            double on = optimal_nonadaptive_exact(inst.model, 2).second;
            double pg = sigma_adaptive_exact(inst.model, Policy::adaptive_greedy(), 2, fb);
            CHECK(oa >= on - 1e-9);
            CHECK(oa >= pg - 1e-9);
        }
    }
}

TEST_CASE("risk-free infected set contains the non-adaptive greedy infected set") {
    for (int i = 0; i < 4; ++i) {
        GeneratedInstance inst = gen_random(7, 0.35, ModelKind::Mixture, RngStream(7000 + i, 0));
        int k = 3;
        GreedyOrder full = greedy_nonadaptive(
            inst.model, static_cast<int>(inst.model.candidate_list().size()), exact_eval());
        std::vector<VertexId> greedy_seeds(full.order.begin(), full.order.begin() + k);
        RngStream rng(7100 + i, 0);
        for (int it = 0; it < 300; ++it) {
            Realization phi = sample_realization(inst.model, rng);
            PolicyRun run = run_policy(inst.model, Policy::risk_free(full), k,
                                       FeedbackKind::FullAdoption, phi, exact_eval());
            Bits risk = make_vertex_set(inst.model.graph.n, run.infected);
            Bits base = cascade_bits(inst.model, phi,
                                     make_vertex_set(inst.model.graph.n, greedy_seeds));
            REQUIRE(risk.contains(base));
        }
    }
}

TEST_CASE("greedy marginal dominates a 1/k share of the optimum's conditional gain") {
    for (int i = 0; i < 10; ++i) {
        GeneratedInstance inst = gen_random(6, 0.3, i % 2 ? ModelKind::LTM : ModelKind::ICM,
                                            RngStream(8000 + i, 0));
        if (inst.model.graph.edge_count() > 6) continue;
        const int k = 2;
        auto [best, best_value] = optimal_nonadaptive_exact(inst.model, k);
        RngStream rng(8100 + i, 0);
        Realization phi = sample_realization(inst.model, rng);
        for (FeedbackKind fb : {FeedbackKind::FullAdoption, FeedbackKind::Myopic}) {
            std::vector<VertexId> seeds{0};
            PartialRealization part = feedback(inst.model, fb, phi, seeds);
            VertexId s = adaptive_greedy_step(inst.model, seeds, part, exact_eval());
            double base = conditional_sigma_exact(inst.model, part, seeds, {});
            double with_s = conditional_sigma_exact(inst.model, part, seeds, {s});
            double with_best = conditional_sigma_exact(inst.model, part, seeds, best);
            CHECK(with_s - base >= (with_best - base) / k - 1e-9);
        }
    }
}

TEST_CASE("adaptive greedy earns at least (1 - 1/e) of the non-adaptive greedy value") {
    const double factor = 1.0 - 1.0 / std::exp(1.0);
    for (int i = 0; i < 12; ++i) {
        GeneratedInstance inst = gen_random(7, 0.3, i % 2 ? ModelKind::LTM : ModelKind::ICM,
                                            RngStream(9500 + i, 0));
        const int k = 3;
        GreedyOrder g = greedy_nonadaptive(inst.model, k, exact_eval());
        double nonadaptive = sigma_exact(inst.model, g.order);
        for (FeedbackKind fb : {FeedbackKind::FullAdoption, FeedbackKind::Myopic}) {
            double adaptive = sigma_adaptive_exact(inst.model, Policy::adaptive_greedy(), k, fb);
            CHECK(adaptive >= factor * nonadaptive - 1e-9);
        }
    }
}

TEST_CASE("LTM influence is additive across unreachable seed sets") {
    for (int i = 0; i < 5; ++i) {
        GeneratedInstance a = gen_random(4, 0.4, ModelKind::LTM, RngStream(9000 + i, 0));
        GeneratedInstance b = gen_random(3, 0.4, ModelKind::LTM, RngStream(9100 + i, 0));
        ModelSpec m = disjoint_union(a.model, b.model);
        std::vector<VertexId> u1{0, 1};
        std::vector<VertexId> u2{4, 5};
        std::vector<VertexId> both{0, 1, 4, 5};
        CHECK(sigma_exact_rational(m, u1) + sigma_exact_rational(m, u2) ==
              sigma_exact_rational(m, both));
    }
}

TEST_CASE("adaptive runs respect k bounds") {
    ModelSpec m = make_model(build_graph(3, {}, {}), ModelKind::ICM);
    Realization phi;
    CHECK_THROWS_AS(run_policy(m, Policy::adaptive_greedy(), 4, FeedbackKind::FullAdoption, phi,
                               exact_eval()),
                    NotEnoughCandidates);
    CHECK_THROWS_AS(sigma_adaptive_exact(m, Policy::adaptive_greedy(), 4,
                                         FeedbackKind::FullAdoption),
                    NotEnoughCandidates);
}

}  // TEST_SUITE
