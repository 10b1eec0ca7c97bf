#pragma once

#include <string>
#include <vector>

#include "ninepoint/geometry.hpp"

namespace ninepoint {

/// Strictly increasing nodes on [0,1] with exact endpoints.
struct Mesh1D {
    std::vector<double> nodes;

    Mesh1D() = default;
    explicit Mesh1D(std::vector<double> n);

    int intervals() const { return static_cast<int>(nodes.size()) - 1; }
};

enum class LayerSide { Low, High };

/// Piecewise-uniform layer-adapted mesh: transition point
/// tau = min(1/2, sigma * eps * ln N), N/2 intervals on each side.
struct ShishkinSpec {
    int N = 0;          // intervals, even, >= 4
    double eps = 1.0;   // perturbation parameter in (0, 1]
    double sigma = 2.0; // mesh constant > 0
    LayerSide layer_side = LayerSide::Low;
};

Mesh1D uniform_mesh(int N);
Mesh1D shishkin_mesh(const ShishkinSpec& spec);
double shishkin_transition_point(const ShishkinSpec& spec);

/// Logarithmically graded layer mesh from the generating function
/// phi(t) = -sigma*eps*ln(1 - t/q), continued by its tangent from the C^1
/// matching point so the last node lands on 1. Falls back to the uniform mesh
/// when sigma*eps >= q (the layer covers the whole interval).
Mesh1D bakhvalov_mesh(int N, double eps, double sigma, double q);

struct TensorMesh2D {
    Mesh1D x;
    Mesh1D y;

    TensorMesh2D() = default;
    TensorMesh2D(Mesh1D xm, Mesh1D ym);

    int interior_x() const { return static_cast<int>(x.nodes.size()) - 2; }
    int interior_y() const { return static_cast<int>(y.nodes.size()) - 2; }
    int interior_count() const { return interior_x() * interior_y(); }

    /// Per-side spacings around interior node (i, j), 1-based grid indices.
    AsymmetricCellGeometry cell(int i, int j) const;
};

/// Per-node feasibility classification of a tensor mesh. A node is flagged
/// feasible only if the symmetrized cell (largest spacing per direction)
/// admits a monotone consistent stencil.
struct CellClassification {
    struct Row {
        int i = 0; // x node index, 1..Nx-1
        int j = 0; // y node index, 1..Ny-1
        double H_minus = 0.0, H_plus = 0.0, h_minus = 0.0, h_plus = 0.0;
        double ratio = 0.0; // max(Hbar/hbar, hbar/Hbar)
        bool monotone_feasible = false;
    };

    std::vector<Row> rows; // lexicographic in (i, j)
    int n_interior = 0;
    int n_infeasible = 0;
    double infeasible_fraction = 0.0;
    double max_ratio = 0.0;
};

CellClassification classify_cells(const TensorMesh2D& mesh);

} // namespace ninepoint
