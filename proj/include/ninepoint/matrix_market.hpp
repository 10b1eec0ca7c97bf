#pragma once

#include <string>

#include "ninepoint/linalg.hpp"

namespace ninepoint {

/// Write a dense matrix in MatrixMarket coordinate format (real, general),
/// skipping exact zeros. One-based indices.
void write_matrix_market(const Matrix& a, const std::string& path);

} // namespace ninepoint
