#pragma once

#include <array>
#include <functional>

#include "ninepoint/geometry.hpp"

namespace ninepoint {

/// The three coefficients that remain free after imposing the consistency
/// conditions. Negative values are allowed; monotonicity is a separate question.
struct FreeParameters {
    double beta2 = 0.0;
    double beta3 = 0.0;
    double beta4 = 0.0;
};

/*
 * Nine-point stencil for Lu = u_xx + u_xy + u_yy.
 *
 * Position map (frozen project-wide; beta[k] stores beta_{k+1}):
 *
 *   beta1 (-H-,  0 )   beta2 (+H+,  0 )   beta3 ( 0 , -h-)   beta4 ( 0 , +h+)
 *   beta5 (-H-, -h-)   beta6 (+H+, -h-)   beta7 (-H-, +h+)   beta8 (+H+, +h+)
 *
 * alpha is the center coefficient. Sample index 0 is the center, 1..8 follow
 * the map above.
 */
struct Stencil9 {
    double alpha = 0.0;
    std::array<double, 8> beta{}; // beta[0] = beta1, ..., beta[7] = beta8
    AsymmetricCellGeometry geom;

    explicit Stencil9(const AsymmetricCellGeometry& g) : geom(g) {}

    /// x-offset of sample point k (0 = center, 1..8 per the position map).
    double dx(int k) const;
    /// y-offset of sample point k.
    double dy(int k) const;

    /// Coefficient of sample point k (alpha for k = 0).
    double coefficient(int k) const { return k == 0 ? alpha : beta[static_cast<std::size_t>(k - 1)]; }
};

/// Signed residuals of the six consistency conditions, left side minus right:
///   r0: sum c           = 0
///   r1: sum c*dx        = 0
///   r2: sum c*dy        = 0
///   r3: sum c*dx^2/2    = 1
///   r4: sum c*dy^2/2    = 1
///   r5: sum c*dx*dy     = 1
/// On a symmetric cell r0, r3, r4, r5 coincide with the classical forms and
/// r1, r2 are the classical ones scaled by H and h.
struct MomentResiduals {
    double r0 = 0.0, r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, r5 = 0.0;

    std::array<double, 6> as_array() const { return {r0, r1, r2, r3, r4, r5}; }
};

/// Unique consistent stencil on a symmetric cell for the given free parameters.
/// Closed form: with S = 2/h^2 - b3 - b4 (y-moment), beta1 = 2/H^2 - b2 - S
/// (x-moment), the four corners follow from the sign-pattern system of the
/// first moments and the mixed moment.
Stencil9 solve_stencil(const CellGeometry& geom, const FreeParameters& free);

/// Unique stencil matching all moments of total degree <= 2 on an asymmetric
/// cell (mixed-moment target 1). Reduces to solve_stencil on symmetric cells.
Stencil9 solve_stencil_asymmetric(const AsymmetricCellGeometry& geom, const FreeParameters& free);

/// Same as solve_stencil_asymmetric but with a caller-chosen target for the
/// mixed moment sum c*dx*dy. Target 0 yields five-point-compatible stencils
/// when the free parameters are the classical three-point second-difference
/// weights.
Stencil9 solve_stencil_mixed_target(const AsymmetricCellGeometry& geom,
                                    const FreeParameters& free, double xy_moment_target);

MomentResiduals moment_residuals(const Stencil9& st);

/// Weighted sum alpha*u[0] + sum beta_i*u[i] over the nine sample points.
double apply_stencil(const Stencil9& st, const std::array<double, 9>& u);

/// beta6 + 1/(2hH) - beta8 - (beta4 - beta3)/2; zero for every consistent
/// stencil on a symmetric cell. Requires symmetric geometry.
double beta6_identity_gap(const Stencil9& st);

/// Observed convergence order of the truncation error L_{H,h}u - Lu at a point,
/// over levels k = 0..levels-1 with H_k = H0/2^k and h_k = s*H_k. The free
/// parameters are given for the unit cell (H = 1, h = s) and rescaled by
/// 1/H_k^2 per level, so the whole sequence uses one stencil family.
/// Returns +infinity when the truncation error vanishes at every level.
double truncation_order_estimate(const std::function<double(double, double)>& u,
                                 const std::function<double(double, double)>& Lu,
                                 double x0, double y0, double h_over_H, double H0, int levels,
                                 const FreeParameters& unit_cell_params);

} // namespace ninepoint
