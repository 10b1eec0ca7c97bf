#include "ninepoint/mesh_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ninepoint/errors.hpp"

namespace ninepoint {

namespace {

std::vector<double> axis_from_json(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw SchemaError(std::string("mesh JSON: missing numeric array \"") + key + "\"");
    }
    std::vector<double> nodes;
    nodes.reserve(j.at(key).size());
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) {
            throw SchemaError(std::string("mesh JSON: \"") + key + "\" must contain only numbers");
        }
        nodes.push_back(v.get<double>());
    }
    return nodes;
}

} // namespace

std::string mesh_to_json_string(const TensorMesh2D& mesh) {
    nlohmann::json j;
    j["x"] = mesh.x.nodes;
    j["y"] = mesh.y.nodes;
    return j.dump(2) + "\n";
}

TensorMesh2D mesh_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw SchemaError("mesh JSON: not a JSON object");
    }
    return TensorMesh2D(Mesh1D(axis_from_json(j, "x")), Mesh1D(axis_from_json(j, "y")));
}

TensorMesh2D read_mesh_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("mesh JSON: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return mesh_from_json_string(buf.str());
}

void write_mesh_json(const TensorMesh2D& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("mesh JSON: cannot open " + path + " for writing");
    out << mesh_to_json_string(mesh);
}

} // namespace ninepoint
