#pragma once

#include <map>
#include <optional>
#include <string>

#include "gapbench/model.hpp"

namespace gapbench {

// On-disk instance: { "n", "vertex_weights", "edges", "labels", "candidates",
// "k", "names", "kind" }.  Omitted vertex weights default to 1; omitted
// labels default to the global kind ("kind" itself defaults to ICM, or to
// MIXTURE when labels are present).
struct InstanceFile {
    ModelSpec model;
    std::optional<int> k;
    std::map<VertexId, std::string> names;
};

InstanceFile read_instance(const std::string& path);
InstanceFile parse_instance_json(const std::string& text, const std::string& origin);
std::string instance_to_json(const ModelSpec& m, std::optional<int> k,
                             const std::map<VertexId, std::string>& names);
void write_instance(const std::string& path, const ModelSpec& m, std::optional<int> k,
                    const std::map<VertexId, std::string>& names);

}  // namespace gapbench
