#include "gapbench/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gapbench/errors.hpp"

namespace gapbench {

using nlohmann::json;

InstanceFile parse_instance_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("n"))
        throw ConfigError(origin + ": instance must be an object with field 'n'");

    InstanceFile out;
    int n = j.at("n").get<int>();
    std::map<VertexId, std::int64_t> weights;
    if (j.contains("vertex_weights")) {
        for (auto& [key, val] : j.at("vertex_weights").items())
            weights[static_cast<VertexId>(std::stol(key))] = val.get<std::int64_t>();
    }
    std::vector<Edge> edges;
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3)
                throw ConfigError(origin + ": each edge must be [src, dst, weight]");
            edges.push_back({e[0].get<VertexId>(), e[1].get<VertexId>(), e[2].get<double>()});
        }
    }
    std::vector<VertexLabel> labels;
    bool has_labels = j.contains("labels") && !j.at("labels").empty();
    ModelKind kind = has_labels ? ModelKind::Mixture : ModelKind::ICM;
    if (j.contains("kind")) {
        std::string ks = j.at("kind").get<std::string>();
        if (ks == "ICM") kind = ModelKind::ICM;
        else if (ks == "LTM") kind = ModelKind::LTM;
        else if (ks == "MIXTURE") kind = ModelKind::Mixture;
        else throw ConfigError(origin + ": unknown kind '" + ks + "'");
    }
    if (kind == ModelKind::Mixture) {
        VertexLabel def = VertexLabel::IC;
        labels.assign(n, def);
        if (has_labels) {
            for (auto& [key, val] : j.at("labels").items()) {
                VertexId v = static_cast<VertexId>(std::stol(key));
                if (v < 0 || v >= n) throw ConfigError(origin + ": label for bad vertex id");
                std::string s = val.get<std::string>();
                if (s == "IC") labels[v] = VertexLabel::IC;
                else if (s == "LT") labels[v] = VertexLabel::LT;
                else throw ConfigError(origin + ": label must be IC or LT");
            }
        }
    }
    std::vector<VertexId> candidates;
    if (j.contains("candidates"))
        for (const auto& c : j.at("candidates")) candidates.push_back(c.get<VertexId>());

    try {
        out.model = make_model(build_graph(n, weights, edges), kind, std::move(labels),
                               std::move(candidates));
    } catch (const ValidationError&) {
        throw;
    }
    if (j.contains("k")) out.k = j.at("k").get<int>();
    if (j.contains("names"))
        for (auto& [key, val] : j.at("names").items())
            out.names[static_cast<VertexId>(std::stol(key))] = val.get<std::string>();
    return out;
}

InstanceFile read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open instance file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance_json(ss.str(), path);
}

std::string instance_to_json(const ModelSpec& m, std::optional<int> k,
                             const std::map<VertexId, std::string>& names) {
    if (m.kind == ModelKind::GTM)
        throw ConfigError("GTM models carry code-valued local functions and have no file form");
    json j;
    j["n"] = m.graph.n;
    j["kind"] = to_string(m.kind);
    json weights = json::object();
    for (VertexId v = 0; v < m.graph.n; ++v)
        if (m.graph.vertex_weight[v] != 1) weights[std::to_string(v)] = m.graph.vertex_weight[v];
    if (!weights.empty()) j["vertex_weights"] = weights;
    json edges = json::array();
    for (const Edge& e : m.graph.edges) edges.push_back(json::array({e.src, e.dst, e.weight}));
    j["edges"] = edges;
    if (m.kind == ModelKind::Mixture) {
        json labels = json::object();
        for (VertexId v = 0; v < m.graph.n; ++v)
            labels[std::to_string(v)] = m.labels[v] == VertexLabel::IC ? "IC" : "LT";
        j["labels"] = labels;
    }
    if (!m.candidates.empty()) j["candidates"] = m.candidates;
    if (k) j["k"] = *k;
    if (!names.empty()) {
        json nm = json::object();
        for (const auto& [v, s] : names) nm[std::to_string(v)] = s;
        j["names"] = nm;
    }
    return j.dump(2) + "\n";
}

void write_instance(const std::string& path, const ModelSpec& m, std::optional<int> k,
                    const std::map<VertexId, std::string>& names) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write instance file " + path);
    out << instance_to_json(m, k, names);
}

}  // namespace gapbench
