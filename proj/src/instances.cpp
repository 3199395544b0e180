#include "gapbench/instances.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gapbench/diffusion.hpp"
#include "gapbench/errors.hpp"
#include "gapbench/io.hpp"

namespace gapbench {

namespace {

std::int64_t isqrt_exact(std::int64_t w) {
    std::int64_t r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(w))));
    while (r * r > w) --r;
    while ((r + 1) * (r + 1) <= w) ++r;
    return r * r == w ? r : -1;
}

std::int64_t checked_pow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > (std::int64_t{1} << 60) / std::max<std::int64_t>(base, 1))
            throw BadParams("parameter power overflows");
        r *= base;
    }
    return r;
}

// Fills `weights` with `count` copies of 1/count whose double sum is exactly
// one (the last entry is the exact complement of the others).
std::vector<double> equal_split_exact(int count) {
    std::vector<double> w(count, 1.0 / count);
    double partial = 0.0;
    for (int i = 0; i + 1 < count; ++i) partial += w[i];
    w[count - 1] = 1.0 - partial;
    return w;
}

// Constructive validation of the intended greedy trajectories on a tight
// instance: s dominates, the u-column beats v_1 without feedback and with
// t revealed infected, and v_1 wins when t is revealed uninfected.
void check_tight_inequalities(const ModelSpec& m, VertexId s, VertexId t, VertexId u_first,
                              VertexId u_last, VertexId v1) {
    ExactOptions opt;
    double sigma_s = sigma_exact(m, {s}, opt);
    for (VertexId x = 0; x < m.graph.n; ++x) {
        if (x == s) continue;
        if (sigma_exact(m, {x}, opt) >= sigma_s)
            throw InequalityCheckFailed("s is not the unique best first seed; W too small");
    }
    auto marginal = [&](const PartialRealization& part, VertexId x) {
        return conditional_sigma_exact(m, part, {s}, {x}, opt) -
               conditional_sigma_exact(m, part, {s}, {}, opt);
    };
    PartialRealization blind = PartialRealization::all_unknown(m.graph.edge_count());
    int st_edge = -1;
    for (int e = 0; e < m.graph.edge_count(); ++e)
        if (m.graph.edges[e].src == s && m.graph.edges[e].dst == t) st_edge = e;
    PartialRealization t_live = blind;
    t_live.status[st_edge] = PartialStatus::Live;
    t_live = strengthen_partial(m, std::move(t_live));
    PartialRealization t_blocked = blind;
    t_blocked.status[st_edge] = PartialStatus::Blocked;

    double u_blind = marginal(blind, u_first);
    double u_live = marginal(t_live, u_first);
    double v1_blind = marginal(blind, v1);
    double v1_live = marginal(t_live, v1);
    double v1_blocked = marginal(t_blocked, v1);
    for (VertexId x = 0; x < m.graph.n; ++x) {
        if (x == s) continue;
        bool is_u = x >= u_first && x <= u_last;
        if (!is_u && marginal(blind, x) >= u_blind)
            throw InequalityCheckFailed("non-adaptive second seed is not a u-vertex; W too small");
        if (!is_u && marginal(t_live, x) >= u_live)
            throw InequalityCheckFailed("t-infected branch does not prefer u; W too small");
        if (x != v1 && marginal(t_blocked, x) >= v1_blocked)
            throw InequalityCheckFailed("t-uninfected branch does not prefer v_1; W too small");
    }
    if (v1_blind >= u_blind || v1_live >= u_live)
        throw InequalityCheckFailed("v_1 outranks the u-column; W too small");
}

void require_tight_params(int k, std::int64_t W, std::int64_t& sqrt_w) {
    if (k < 1) throw BadParams("k must be positive");
    sqrt_w = isqrt_exact(W);
    if (sqrt_w < 0) throw BadParams("W must be a perfect square");
    if (W % checked_pow(k, 2 * k) != 0) throw BadParams("W must be divisible by k^(2k)");
    // strict: 2k/sqrt(W) = 1 would make the probe edge deterministic
    if (sqrt_w <= 2 * k) throw BadParams("W must satisfy sqrt(W) > 2k");
}

}  // namespace

GeneratedInstance gen_icm_tight(int k, std::int64_t W, bool validate_trajectory) {
    std::int64_t s_w = 0;
    require_tight_params(k, W, s_w);
    const std::int64_t kk = k;

    GeneratedInstance out;
    std::ostringstream desc;
    desc << "icm_tight(k=" << k << ",W=" << W << ")";
    out.descriptor = desc.str();
    out.k = k + 1;

    const VertexId s = 0, t = 1;
    auto u_id = [&](int i) { return static_cast<VertexId>(2 + (i - 1)); };            // i = 1..k
    auto v_id = [&](int i) { return static_cast<VertexId>(2 + k + (i - 1)); };        // i = 1..k
    auto w_id = [&](int i, int j) {                                                   // i = 1..k+1
        return static_cast<VertexId>(2 + 2 * k + (i - 1) * k + (j - 1));
    };
    int n = 2 + 2 * k + (k + 1) * k;

    std::map<VertexId, std::int64_t> weights;
    weights[s] = 2 * W;
    weights[t] = s_w / kk;
    for (int j = 1; j <= k; ++j) {
        weights[w_id(1, j)] = W / kk;
        for (int i = 2; i <= k; ++i)
            weights[w_id(i, j)] = W * checked_pow(k - 1, i - 1) / checked_pow(k, i) + s_w;
        std::int64_t last = W * checked_pow(k - 1, k) / checked_pow(k, k) +
                            (s_w - kk) / kk - (kk - 1) * s_w;
        if (last < 1) throw InequalityCheckFailed("row k+1 weight non-positive; W too small");
        weights[w_id(k + 1, j)] = last;
    }

    std::vector<Edge> edges;
    edges.push_back({v_id(1), t, 1.0});
    edges.push_back({s, t, 2.0 * static_cast<double>(kk) / static_cast<double>(s_w)});
    for (int i = 1; i <= k; ++i) {
        for (int j = 1; j <= k + 1; ++j) edges.push_back({u_id(i), w_id(j, i), 1.0});
        for (int j = 1; j <= k; ++j) edges.push_back({v_id(i), w_id(i, j), 1.0});
    }

    out.model = make_model(build_graph(n, weights, edges), ModelKind::ICM);
    out.names[s] = "s";
    out.names[t] = "t";
    for (int i = 1; i <= k; ++i) out.names[u_id(i)] = "u" + std::to_string(i);
    for (int i = 1; i <= k; ++i) out.names[v_id(i)] = "v" + std::to_string(i);
    for (int i = 1; i <= k + 1; ++i)
        for (int j = 1; j <= k; ++j)
            out.names[w_id(i, j)] = "w" + std::to_string(i) + std::to_string(j);

    if (validate_trajectory) check_tight_inequalities(out.model, s, t, u_id(1), u_id(k), v_id(1));
    return out;
}

GeneratedInstance gen_ltm_tight(int k, std::int64_t W, bool validate_trajectory) {
    std::int64_t s_w = 0;
    require_tight_params(k, W, s_w);
    const std::int64_t kk = k;

    GeneratedInstance out;
    std::ostringstream desc;
    desc << "ltm_tight(k=" << k << ",W=" << W << ")";
    out.descriptor = desc.str();
    out.k = k + 1;

    const VertexId s = 0, t = 1;
    auto u_id = [&](int i) { return static_cast<VertexId>(2 + (i - 1)); };      // i = 1..k
    auto v_id = [&](int i) { return static_cast<VertexId>(2 + k + (i - 1)); };  // i = 1..2k
    int n = 2 + 3 * k;

    std::map<VertexId, std::int64_t> weights;
    weights[s] = 2 * W;
    weights[t] = s_w / kk;
    weights[v_id(1)] = W + 1;
    for (int i = 2; i <= k; ++i)
        weights[v_id(i)] = W * checked_pow(k - 1, i - 1) / checked_pow(k, i - 1) + s_w;
    std::int64_t tail = W * checked_pow(k - 1, k) / checked_pow(k, k);
    for (int i = k + 1; i < 2 * k; ++i) weights[v_id(i)] = tail;
    std::int64_t last = tail + s_w - kk - (kk - 1) * s_w - 1;
    if (last < 1) throw InequalityCheckFailed("v_2k weight non-positive; W too small");
    weights[v_id(2 * k)] = last;

    double p = 2.0 * static_cast<double>(kk) / static_cast<double>(s_w);
    std::vector<Edge> edges;
    edges.push_back({v_id(1), t, 1.0 - p});
    edges.push_back({s, t, p});
    std::vector<double> split = equal_split_exact(k);
    for (int j = 1; j <= 2 * k; ++j)
        for (int i = 1; i <= k; ++i) edges.push_back({u_id(i), v_id(j), split[i - 1]});

    out.model = make_model(build_graph(n, weights, edges), ModelKind::LTM);
    out.names[s] = "s";
    out.names[t] = "t";
    for (int i = 1; i <= k; ++i) out.names[u_id(i)] = "u" + std::to_string(i);
    for (int i = 1; i <= 2 * k; ++i) out.names[v_id(i)] = "v" + std::to_string(i);

    if (validate_trajectory) check_tight_inequalities(out.model, s, t, u_id(1), u_id(k), v_id(1));
    return out;
}

namespace {

// Tree ids in level order; returns first id of each level.
std::vector<std::int64_t> level_offsets(int d, int levels) {
    std::vector<std::int64_t> off(levels + 1);
    off[0] = 0;
    std::int64_t width = 1;
    for (int l = 0; l < levels; ++l) {
        off[l + 1] = off[l] + width;
        width *= d;
    }
    return off;
}

std::int64_t tree_budget(int d) {
    std::int64_t num = checked_pow(d + 1, d);
    std::int64_t den = checked_pow(2, d - 1);
    return (num + den - 1) / den;  // ceil(2 ((d+1)/2)^d)
}

}  // namespace

GeneratedInstance gen_tree_prescribed(int d, std::int64_t W, bool pendants) {
    if (d < 1) throw BadParams("d must be at least 1");
    if (W < 1) throw BadParams("W must be at least 1");
    std::vector<std::int64_t> off = level_offsets(d, d + 1);
    std::int64_t tree_n = off[d + 1];
    std::int64_t n = tree_n + (pendants ? W : 0);
    if (n > (std::int64_t{1} << 24)) throw BadParams("tree too large to materialize");

    std::vector<Edge> edges;
    std::vector<double> split = equal_split_exact(d);
    for (int l = 1; l <= d; ++l) {
        for (std::int64_t i = 0; i < off[l + 1] - off[l]; ++i) {
            VertexId child = static_cast<VertexId>(off[l] + i);
            VertexId parent = static_cast<VertexId>(off[l - 1] + i / d);
            edges.push_back({child, parent, split[i % d]});
        }
    }
    std::map<VertexId, std::int64_t> weights;
    if (pendants) {
        for (std::int64_t i = 0; i < W; ++i)
            edges.push_back({0, static_cast<VertexId>(tree_n + i), 1.0});
    } else {
        weights[0] = W + 1;
    }
    std::vector<VertexId> candidates;
    for (std::int64_t i = off[d]; i < off[d + 1]; ++i)
        candidates.push_back(static_cast<VertexId>(i));

    GeneratedInstance out;
    std::ostringstream desc;
    desc << "tree_prescribed(d=" << d << ",W=" << W << ")";
    out.descriptor = desc.str();
    out.k = static_cast<int>(std::min<std::int64_t>(tree_budget(d), 1 << 30));
    out.model = make_model(build_graph(static_cast<int>(n), weights, edges), ModelKind::LTM, {},
                           std::move(candidates));
    out.names[0] = "root";
    return out;
}

GeneratedInstance gen_mixture(int d, int M, std::int64_t W, bool explicit_a,
                              MixtureMeta* meta_out) {
    if (d < 1 || M < 1) throw BadParams("d and M must be positive");
    if (W < 1) throw BadParams("W must be at least 1");
    std::vector<std::int64_t> off = level_offsets(d, d + 1);
    std::int64_t tree_n = off[d + 1];
    std::int64_t L = checked_pow(d, d);

    MixtureMeta meta;
    meta.d = d;
    meta.M = M;
    meta.W = W;
    meta.leaves_per_tree = L;
    meta.explicit_a = explicit_a;

    std::int64_t a_count = 0;
    if (explicit_a) {
        double total = std::pow(static_cast<double>(L), M);
        if (total > static_cast<double>(1 << 20))
            throw TooLargeToEnumerate("explicit connector set exceeds the cap");
        a_count = checked_pow(L, M);
    }
    std::int64_t n = tree_n * M + a_count;

    std::vector<Edge> edges;
    std::vector<double> split = equal_split_exact(d);
    std::map<VertexId, std::int64_t> weights;
    std::vector<VertexLabel> labels(n, VertexLabel::LT);
    for (int tr = 0; tr < M; ++tr) {
        std::int64_t base = tr * tree_n;
        meta.roots.push_back(static_cast<VertexId>(base));
        weights[static_cast<VertexId>(base)] = W + 1;
        for (int l = 1; l <= d; ++l) {
            for (std::int64_t i = 0; i < off[l + 1] - off[l]; ++i) {
                VertexId child = static_cast<VertexId>(base + off[l] + i);
                VertexId parent = static_cast<VertexId>(base + off[l - 1] + i / d);
                edges.push_back({child, parent, split[i % d]});
            }
        }
        std::vector<VertexId> leaves;
        for (std::int64_t i = off[d]; i < off[d + 1]; ++i) {
            leaves.push_back(static_cast<VertexId>(base + i));
            labels[base + i] = VertexLabel::IC;
        }
        meta.leaves.push_back(std::move(leaves));
    }
    if (explicit_a) {
        meta.a_base = static_cast<VertexId>(tree_n * M);
        for (std::int64_t z = 0; z < a_count; ++z) {
            VertexId a = static_cast<VertexId>(meta.a_base + z);
            labels[a] = VertexLabel::IC;
            std::int64_t rest = z;
            for (int tr = M - 1; tr >= 0; --tr) {
                std::int64_t leaf_idx = rest % L;
                rest /= L;
                edges.push_back({a, meta.leaves[tr][leaf_idx], 1.0});
            }
        }
    }

    GeneratedInstance out;
    std::ostringstream desc;
    desc << "mixture(d=" << d << ",M=" << M << ",W=" << W
         << (explicit_a ? ",explicit" : ",implicit") << ")";
    out.descriptor = desc.str();
    out.k = static_cast<int>(std::min<std::int64_t>(tree_budget(d), 1 << 30));
    out.model = make_model(build_graph(static_cast<int>(n), weights, edges), ModelKind::Mixture,
                           std::move(labels));
    if (meta_out) *meta_out = meta;
    return out;
}

std::vector<VertexId> implicit_mixture_candidate(const MixtureMeta& meta,
                                                 const ModelSpec& tree_model, const Bits& known) {
    const WeightedDigraph& g = tree_model.graph;
    std::vector<VertexId> choice;
    for (int tr = 0; tr < meta.M; ++tr) {
        VertexId pick = meta.leaves[tr].front();
        for (VertexId leaf : meta.leaves[tr]) {
            bool clean = true;
            VertexId cur = leaf;
            while (true) {
                if (known.test(cur)) {
                    clean = false;
                    break;
                }
                if (g.out_edges[cur].empty()) break;
                cur = g.edges[g.out_edges[cur].front()].dst;  // unique parent edge
            }
            if (clean) {
                pick = leaf;
                break;
            }
        }
        choice.push_back(pick);
    }
    return choice;
}

VertexId explicit_a_vertex(const MixtureMeta& meta, const std::vector<VertexId>& leaf_choice) {
    if (!meta.explicit_a) throw BadParams("instance has no explicit connector vertices");
    if (static_cast<int>(leaf_choice.size()) != meta.M)
        throw BadParams("need one leaf per tree");
    std::int64_t z = 0;
    for (int tr = 0; tr < meta.M; ++tr) {
        std::int64_t idx = -1;
        for (std::int64_t i = 0; i < meta.leaves_per_tree; ++i)
            if (meta.leaves[tr][i] == leaf_choice[tr]) idx = i;
        if (idx < 0) throw BadVertexId("choice is not a leaf of its tree");
        z = z * meta.leaves_per_tree + idx;
    }
    return static_cast<VertexId>(meta.a_base + z);
}

EstimateCI sigma_adaptive_implicit_mixture(const MixtureMeta& meta, const ModelSpec& tree_model,
                                           int k, std::int64_t n, const RngStream& rng) {
    if (n < 2) throw BadParams("need at least two samples");
    std::vector<double> vals;
    vals.reserve(n);
    for (std::int64_t it = 0; it < n; ++it) {
        RngStream r = rng.derive(it);
        Realization phi = sample_realization(tree_model, r);
        std::vector<VertexId> seeded_leaves;
        std::set<std::vector<VertexId>> connectors;  // distinct vectors picked
        for (int step = 0; step < k; ++step) {
            PartialRealization part =
                full_adoption_feedback(tree_model, phi, seeded_leaves);
            Bits known = known_infected_bits(tree_model, part,
                                             make_vertex_set(tree_model.graph.n, seeded_leaves));
            std::vector<VertexId> choice = implicit_mixture_candidate(meta, tree_model, known);
            connectors.insert(choice);
            for (VertexId leaf : choice) seeded_leaves.push_back(leaf);
        }
        std::sort(seeded_leaves.begin(), seeded_leaves.end());
        seeded_leaves.erase(std::unique(seeded_leaves.begin(), seeded_leaves.end()),
                            seeded_leaves.end());
        Bits infected = cascade_bits(tree_model, phi,
                                     make_vertex_set(tree_model.graph.n, seeded_leaves));
        // each distinct connector seed counts itself (weight 1) on top of the trees
        vals.push_back(static_cast<double>(connectors.size()) +
                       static_cast<double>(total_weight(tree_model.graph, infected)));
    }
    return make_estimate(vals, rng.master_seed());
}

GeneratedInstance gen_random(int n, double density, ModelKind kind, RngStream rng) {
    if (n < 0) throw BadParams("n must be non-negative");
    if (density < 0.0 || density > 1.0) throw BadParams("density must lie in [0,1]");
    if (kind == ModelKind::GTM) throw BadParams("random GTM instances are built by lifting");

    std::vector<VertexLabel> labels(n, VertexLabel::IC);
    if (kind == ModelKind::Mixture)
        for (auto& l : labels) l = rng.bernoulli(0.5) ? VertexLabel::IC : VertexLabel::LT;

    auto label_of = [&](VertexId v) {
        switch (kind) {
            case ModelKind::ICM: return VertexLabel::IC;
            case ModelKind::LTM: return VertexLabel::LT;
            default: return labels[v];
        }
    };

    // dyadic raw weights a/64, rescaled by a power of two when an LT vertex
    // oversubscribes; keeps every weight exactly representable
    std::vector<Edge> edges;
    std::vector<std::vector<std::pair<VertexId, int>>> in_raw(n);
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = 0; v < n; ++v) {
            if (u == v) continue;
            if (!rng.bernoulli(density)) continue;
            in_raw[v].push_back({u, static_cast<int>(rng.uniform_index(64)) + 1});
        }
    for (VertexId v = 0; v < n; ++v) {
        std::int64_t denom = 64;
        if (label_of(v) == VertexLabel::LT) {
            std::int64_t sum = 0;
            for (auto& [u, a] : in_raw[v]) sum += a;
            while (sum > denom) denom *= 2;
        }
        for (auto& [u, a] : in_raw[v])
            edges.push_back({u, v, static_cast<double>(a) / static_cast<double>(denom)});
    }

    GeneratedInstance out;
    std::ostringstream desc;
    desc << "random(n=" << n << ",density=" << density << ",kind=" << to_string(kind)
         << ",seed=" << rng.master_seed() << ")";
    out.descriptor = desc.str();
    out.k = std::max(1, n / 4);
    out.model = make_model(build_graph(n, {}, edges), kind,
                           kind == ModelKind::Mixture ? labels : std::vector<VertexLabel>{});
    return out;
}

ModelSpec disjoint_union(const ModelSpec& a, const ModelSpec& b) {
    if (a.kind == ModelKind::GTM || b.kind == ModelKind::GTM)
        throw BadParams("disjoint_union supports triggering models only");
    int n = a.graph.n + b.graph.n;
    std::map<VertexId, std::int64_t> weights;
    std::vector<Edge> edges = a.graph.edges;
    for (VertexId v = 0; v < a.graph.n; ++v)
        if (a.graph.vertex_weight[v] != 1) weights[v] = a.graph.vertex_weight[v];
    for (VertexId v = 0; v < b.graph.n; ++v)
        if (b.graph.vertex_weight[v] != 1) weights[v + a.graph.n] = b.graph.vertex_weight[v];
    for (const Edge& e : b.graph.edges)
        edges.push_back({e.src + a.graph.n, e.dst + a.graph.n, e.weight});
    std::vector<VertexLabel> labels(n);
    for (VertexId v = 0; v < a.graph.n; ++v) labels[v] = a.label_of(v);
    for (VertexId v = 0; v < b.graph.n; ++v) labels[v + a.graph.n] = b.label_of(v);
    ModelKind kind = (a.kind == b.kind && a.kind != ModelKind::Mixture) ? a.kind
                                                                        : ModelKind::Mixture;
    return make_model(build_graph(n, weights, edges), kind,
                      kind == ModelKind::Mixture ? labels : std::vector<VertexLabel>{});
}

namespace {

std::int64_t param_int(const InstanceSpec& spec, const std::string& key, std::int64_t def,
                       bool required = false) {
    auto it = spec.params.find(key);
    if (it == spec.params.end()) {
        if (required) throw ConfigError("generator '" + spec.generator + "' needs param '" + key + "'");
        return def;
    }
    try {
        return std::stoll(it->second);
    } catch (...) {
        throw ConfigError("param '" + key + "' must be an integer, got '" + it->second + "'");
    }
}

double param_real(const InstanceSpec& spec, const std::string& key, double def) {
    auto it = spec.params.find(key);
    if (it == spec.params.end()) return def;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw ConfigError("param '" + key + "' must be a number, got '" + it->second + "'");
    }
}

}  // namespace

GeneratedInstance build_instance(const InstanceSpec& spec) {
    const std::string& g = spec.generator;
    if (g == "icm_tight")
        return gen_icm_tight(static_cast<int>(param_int(spec, "k", 2)),
                             param_int(spec, "W", 1600), param_int(spec, "validate", 1) != 0);
    if (g == "ltm_tight")
        return gen_ltm_tight(static_cast<int>(param_int(spec, "k", 2)),
                             param_int(spec, "W", 1600), param_int(spec, "validate", 1) != 0);
    if (g == "tree_prescribed")
        return gen_tree_prescribed(static_cast<int>(param_int(spec, "d", 2)),
                                   param_int(spec, "W", 100),
                                   param_int(spec, "pendants", 0) != 0);
    if (g == "mixture")
        return gen_mixture(static_cast<int>(param_int(spec, "d", 2)),
                           static_cast<int>(param_int(spec, "M", 2)), param_int(spec, "W", 100),
                           param_int(spec, "explicit", 1) != 0);
    if (g == "random") {
        std::string kind_s = spec.params.count("kind") ? spec.params.at("kind") : "ICM";
        ModelKind kind;
        if (kind_s == "ICM") kind = ModelKind::ICM;
        else if (kind_s == "LTM") kind = ModelKind::LTM;
        else if (kind_s == "MIXTURE") kind = ModelKind::Mixture;
        else throw ConfigError("random generator kind must be ICM, LTM or MIXTURE");
        return gen_random(static_cast<int>(param_int(spec, "n", 8)),
                          param_real(spec, "density", 0.2), kind,
                          RngStream(static_cast<std::uint64_t>(param_int(spec, "seed", 1)), 0));
    }
    if (g == "file") {
        auto it = spec.params.find("path");
        if (it == spec.params.end()) throw ConfigError("file generator needs param 'path'");
        InstanceFile f = read_instance(it->second);
        GeneratedInstance out;
        out.model = std::move(f.model);
        out.k = f.k.value_or(1);
        out.names = std::move(f.names);
        out.descriptor = it->second;
        return out;
    }
    throw ConfigError("unknown generator '" + g + "'");
}

}  // namespace gapbench
