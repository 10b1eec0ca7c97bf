#pragma once

#include <array>
#include <string>
#include <vector>

#include "ninepoint/geometry.hpp"
#include "ninepoint/stencil.hpp"

namespace ninepoint {

/// Affine dependence of the eight off-center coefficients on the free
/// parameters (beta2, beta3, beta4): beta_i = base[i] + grad[i] . (b2, b3, b4).
struct StencilAffineMap {
    std::array<double, 8> base{};
    std::array<std::array<double, 3>, 8> grad{};

    double beta(int i, const FreeParameters& p) const {
        return base[static_cast<std::size_t>(i)] + grad[static_cast<std::size_t>(i)][0] * p.beta2 +
               grad[static_cast<std::size_t>(i)][1] * p.beta3 +
               grad[static_cast<std::size_t>(i)][2] * p.beta4;
    }

    double min_beta(const FreeParameters& p) const;

    /// Largest 1-norm of a coefficient gradient; Lipschitz constant of every
    /// beta_i with respect to max-norm steps in the parameters.
    double lipschitz() const;
};

StencilAffineMap stencil_affine_map(const AsymmetricCellGeometry& geom);

/// Outcome of the monotone-feasibility question for one cell: margin is the
/// maximum over free parameters of the minimum stencil coefficient.
struct FeasibilityReport {
    bool feasible = false;
    double margin = 0.0;
    FreeParameters argmax_params;
    std::vector<int> binding_indices; // 1-based coefficient indices attaining the margin
    std::string method = "vertex-enumeration";
};

/// Scale-aware feasibility tolerance: margins scale like 1/(hH).
inline double feasibility_tolerance(double H_bar, double h_bar) {
    return 1e-12 / (h_bar * H_bar);
}

FeasibilityReport monotonicity_margin(const CellGeometry& geom);
FeasibilityReport monotonicity_margin(const AsymmetricCellGeometry& geom);

bool is_feasible(const CellGeometry& geom);

/// Aspect-ratio threshold r* = H/h (h = 1) where the margin changes sign,
/// located by bisection; the bracket is tightened below 1e-9.
double feasibility_threshold();

/// Closed-form monotone witness, valid for 1/2 <= h/H <= 2:
/// beta5 = beta8 = 1/(2hH), beta6 = beta7 = 0, beta1 = beta2 = 1/H^2 - 1/(2hH),
/// beta3 = beta4 = 1/h^2 - 1/(2hH).
Stencil9 explicit_family(const CellGeometry& geom);

/// Free parameters of the explicit family (for feeding an asymmetric solver).
FreeParameters explicit_family_params(const CellGeometry& geom);

struct BruteForceGrid {
    int resolution = 41; // points per axis, >= 20
    bool has_box = false;
    double lo = 0.0; // used when has_box; default box is [-2/(hH), 4/(hH)]^3
    double hi = 0.0;
};

/// Best min-coefficient over a cubic grid of free parameters; an independent
/// lower-bound oracle for the vertex-enumeration margin.
double brute_force_margin(const CellGeometry& geom, const BruteForceGrid& grid = {});

struct MarginSweepRow {
    double ratio = 0.0;             // H/h with h = 1
    double normalized_margin = 0.0; // margin * hH, scale-free
    bool feasible = false;
};

std::vector<MarginSweepRow> margin_sweep(const std::vector<double>& ratios);

/// Largest possible beta6 when the other seven coefficients are required to be
/// nonnegative. Exactly (h/H - 1/2)/(hH) in the strongly anisotropic regime,
/// which isolates the -1/(2hH) obstruction carried by beta6.
double beta6_cap(const CellGeometry& geom);

} // namespace ninepoint
