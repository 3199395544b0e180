#include "gapbench/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gapbench/errors.hpp"

namespace gapbench {

const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::ICM: return "ICM";
        case ModelKind::LTM: return "LTM";
        case ModelKind::Mixture: return "MIXTURE";
        case ModelKind::GTM: return "GTM";
    }
    return "?";
}

LocalInfluence ic_form_local(std::vector<double> in_weights) {
    return LocalInfluence([w = std::move(in_weights)](std::uint64_t mask) {
        double stay = 1.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (mask & (std::uint64_t{1} << i)) stay *= 1.0 - w[i];
        return 1.0 - stay;
    });
}

LocalInfluence lt_form_local(std::vector<double> in_weights) {
    return LocalInfluence([w = std::move(in_weights)](std::uint64_t mask) {
        double sum = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (mask & (std::uint64_t{1} << i)) sum += w[i];
        return std::min(sum, 1.0);
    });
}

std::vector<VertexId> ModelSpec::candidate_list() const {
    if (!candidates.empty()) return candidates;
    std::vector<VertexId> all(graph.n);
    std::iota(all.begin(), all.end(), 0);
    return all;
}

static std::vector<VertexId> normalize_candidates(int n, std::vector<VertexId> c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (VertexId v : c)
        if (v < 0 || v >= n) throw BadVertexId("candidate id out of range: " + std::to_string(v));
    return c;
}

ModelSpec make_model(WeightedDigraph g, ModelKind kind, std::vector<VertexLabel> labels,
                     std::vector<VertexId> candidates) {
    ModelSpec m;
    m.kind = kind;
    m.candidates = normalize_candidates(g.n, std::move(candidates));
    if (kind == ModelKind::Mixture) {
        if (static_cast<int>(labels.size()) != g.n)
            throw BadParams("mixture model needs one IC/LT label per vertex");
        m.labels = std::move(labels);
    } else if (kind == ModelKind::GTM) {
        throw BadParams("use make_gtm_model for GTM models");
    }
    m.graph = std::move(g);
    validate_model(m);
    return m;
}

ModelSpec make_gtm_model(WeightedDigraph g, std::vector<LocalInfluence> local,
                         std::vector<VertexId> candidates) {
    ModelSpec m;
    m.kind = ModelKind::GTM;
    m.candidates = normalize_candidates(g.n, std::move(candidates));
    if (static_cast<int>(local.size()) != g.n)
        throw BadParams("GTM model needs one local influence function per vertex");
    m.local = std::move(local);
    m.graph = std::move(g);
    validate_model(m);
    return m;
}

ModelSpec lift_to_gtm(const ModelSpec& m) {
    if (!m.is_triggering()) return m;
    std::vector<LocalInfluence> local(m.graph.n);
    for (VertexId v = 0; v < m.graph.n; ++v) {
        std::vector<double> w;
        for (int eid : m.graph.in_edges[v]) w.push_back(m.graph.edges[eid].weight);
        local[v] = m.label_of(v) == VertexLabel::IC ? ic_form_local(std::move(w))
                                                    : lt_form_local(std::move(w));
    }
    return make_gtm_model(m.graph, std::move(local), m.candidates);
}

void validate_model(const ModelSpec& m) {
    const WeightedDigraph& g = m.graph;
    for (VertexId v = 0; v < g.n; ++v) {
        if (m.kind == ModelKind::GTM) {
            if (g.in_degree(v) > 63)
                throw BadParams("GTM in-degree above bitmask capacity at vertex " + std::to_string(v));
            const LocalInfluence& f = m.local[v];
            if (!f.valid()) throw BadParams("missing local influence function");
            if (std::abs(f(0)) > 1e-15)
                throw BadParams("local influence must satisfy f(empty)=0");
            // spot-check monotonicity on the chain of all-prefixes
            double prev = 0.0;
            std::uint64_t mask = 0;
            for (int i = 0; i < g.in_degree(v); ++i) {
                mask |= std::uint64_t{1} << i;
                double cur = f(mask);
                if (cur + 1e-12 < prev) throw BadParams("local influence not monotone");
                prev = cur;
            }
            continue;
        }
        if (m.label_of(v) == VertexLabel::LT) {
            double sum = 0.0;
            for (int eid : g.in_edges[v]) sum += g.edges[eid].weight;
            if (sum > 1.0 + kLtSumTolerance)
                throw WeightOutOfRange("LT in-weight sum exceeds 1 at vertex " + std::to_string(v));
        }
    }
}

}  // namespace gapbench
