#pragma once

#include <string>

#include "ninepoint/mesh.hpp"

namespace ninepoint {

/// Mesh files are JSON objects {"x": [...], "y": [...]} with full-precision
/// node coordinates. Schema problems raise SchemaError; content problems
/// (non-monotone nodes, wrong endpoints) raise std::invalid_argument.
TensorMesh2D read_mesh_json(const std::string& path);
void write_mesh_json(const TensorMesh2D& mesh, const std::string& path);

std::string mesh_to_json_string(const TensorMesh2D& mesh);
TensorMesh2D mesh_from_json_string(const std::string& text);

} // namespace ninepoint
