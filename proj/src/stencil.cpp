#include "ninepoint/stencil.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ninepoint/errors.hpp"
#include "ninepoint/linalg.hpp"

namespace ninepoint {

namespace {

void require_finite(const FreeParameters& p) {
    if (!(std::isfinite(p.beta2) && std::isfinite(p.beta3) && std::isfinite(p.beta4))) {
        throw std::invalid_argument("free parameters must be finite");
    }
}

} // namespace

double Stencil9::dx(int k) const {
    switch (k) {
    case 0: case 3: case 4: return 0.0;
    case 1: case 5: case 7: return -geom.H_minus;
    case 2: case 6: case 8: return geom.H_plus;
    default: throw std::out_of_range("Stencil9::dx: sample index out of range");
    }
}

double Stencil9::dy(int k) const {
    switch (k) {
    case 0: case 1: case 2: return 0.0;
    case 3: case 5: case 6: return -geom.h_minus;
    case 4: case 7: case 8: return geom.h_plus;
    default: throw std::out_of_range("Stencil9::dy: sample index out of range");
    }
}

Stencil9 solve_stencil(const CellGeometry& geom, const FreeParameters& free) {
    require_finite(free);
    const double H = geom.H;
    const double h = geom.h;

    // y-moment fixes the corner sum, x-moment then fixes beta1.
    const double corner_sum = 2.0 / (h * h) - free.beta3 - free.beta4;
    const double beta1 = 2.0 / (H * H) - free.beta2 - corner_sum;

    // First moments and the mixed moment give a sign-pattern system for the
    // four corners.
    const double a = beta1 - free.beta2;       // (b6+b8) - (b5+b7)
    const double bv = free.beta3 - free.beta4; // (b7+b8) - (b5+b6)
    const double c = 1.0 / (h * H);            // (b5+b8) - (b6+b7)
    const double q = corner_sum;

    Stencil9 st(AsymmetricCellGeometry::from_symmetric(geom));
    st.beta[0] = beta1;
    st.beta[1] = free.beta2;
    st.beta[2] = free.beta3;
    st.beta[3] = free.beta4;
    st.beta[4] = (q - a - bv + c) / 4.0;
    st.beta[5] = (q + a - bv - c) / 4.0;
    st.beta[6] = (q - a + bv - c) / 4.0;
    st.beta[7] = (q + a + bv + c) / 4.0;

    double sum = 0.0;
    for (double b : st.beta) sum += b;
    st.alpha = -sum;
    return st;
}

Stencil9 solve_stencil_mixed_target(const AsymmetricCellGeometry& geom,
                                    const FreeParameters& free, double xy_moment_target) {
    require_finite(free);
    if (!std::isfinite(xy_moment_target)) {
        throw std::invalid_argument("mixed-moment target must be finite");
    }

    Stencil9 st(geom);
    st.beta[1] = free.beta2;
    st.beta[2] = free.beta3;
    st.beta[3] = free.beta4;

    // Unknowns: beta1, beta5, beta6, beta7, beta8 (sample points 1, 5, 6, 7, 8).
    // Rows: the five moment conditions of degree >= 1; alpha follows from the
    // zeroth moment afterwards.
    const int unknown_points[5] = {1, 5, 6, 7, 8};
    const int known_points[3] = {2, 3, 4};
    const double known_coefs[3] = {free.beta2, free.beta3, free.beta4};
    const double targets[5] = {0.0, 0.0, 1.0, 1.0, xy_moment_target};

    auto moment_weight = [&st](int row, int point) {
        const double x = st.dx(point);
        const double y = st.dy(point);
        switch (row) {
        case 0: return x;
        case 1: return y;
        case 2: return 0.5 * x * x;
        case 3: return 0.5 * y * y;
        default: return x * y;
        }
    };

    Matrix m(5, 5);
    std::vector<double> rhs(5);
    for (int r = 0; r < 5; ++r) {
        for (int u = 0; u < 5; ++u) m(r, u) = moment_weight(r, unknown_points[u]);
        double acc = targets[r];
        for (int k = 0; k < 3; ++k) acc -= known_coefs[k] * moment_weight(r, known_points[k]);
        rhs[r] = acc;
    }

    std::vector<int> piv;
    try {
        lu_factor(m, piv);
        lu_solve(m, piv, rhs);
    } catch (const SingularMatrixError&) {
        throw DegenerateGeometryError("local moment system is singular for this cell");
    }

    st.beta[0] = rhs[0];
    st.beta[4] = rhs[1];
    st.beta[5] = rhs[2];
    st.beta[6] = rhs[3];
    st.beta[7] = rhs[4];

    double sum = 0.0;
    for (double b : st.beta) sum += b;
    st.alpha = -sum;
    return st;
}

Stencil9 solve_stencil_asymmetric(const AsymmetricCellGeometry& geom, const FreeParameters& free) {
    return solve_stencil_mixed_target(geom, free, 1.0);
}

MomentResiduals moment_residuals(const Stencil9& st) {
    MomentResiduals r;
    for (int k = 0; k < 9; ++k) {
        const double c = st.coefficient(k);
        const double x = st.dx(k);
        const double y = st.dy(k);
        r.r0 += c;
        r.r1 += c * x;
        r.r2 += c * y;
        r.r3 += c * 0.5 * x * x;
        r.r4 += c * 0.5 * y * y;
        r.r5 += c * x * y;
    }
    r.r3 -= 1.0;
    r.r4 -= 1.0;
    r.r5 -= 1.0;
    return r;
}

double apply_stencil(const Stencil9& st, const std::array<double, 9>& u) {
    for (double v : u) {
        if (!std::isfinite(v)) throw std::invalid_argument("apply_stencil: samples must be finite");
    }
    double acc = st.alpha * u[0];
    for (int k = 1; k < 9; ++k) acc += st.beta[static_cast<std::size_t>(k - 1)] * u[static_cast<std::size_t>(k)];
    return acc;
}

double beta6_identity_gap(const Stencil9& st) {
    if (!st.geom.is_symmetric()) {
        throw std::invalid_argument("beta6_identity_gap requires a symmetric cell");
    }
    const double H = st.geom.H_plus;
    const double h = st.geom.h_plus;
    return st.beta[5] + 1.0 / (2.0 * h * H) - st.beta[7] - (st.beta[3] - st.beta[2]) / 2.0;
}

double truncation_order_estimate(const std::function<double(double, double)>& u,
                                 const std::function<double(double, double)>& Lu,
                                 double x0, double y0, double h_over_H, double H0, int levels,
                                 const FreeParameters& unit_cell_params) {
    if (levels < 4 || !(H0 > 0.0) || !(h_over_H > 0.0) || !std::isfinite(H0) ||
        !std::isfinite(h_over_H) || !std::isfinite(x0) || !std::isfinite(y0)) {
        throw std::invalid_argument("truncation_order_estimate: need >= 4 levels and a valid refinement sequence");
    }

    const double exact = Lu(x0, y0);

    std::vector<double> log_h;
    std::vector<double> log_e;
    for (int k = 0; k < levels; ++k) {
        const double H = H0 / static_cast<double>(1 << k);
        const double h = h_over_H * H;
        // One stencil family across levels: rescale the unit-cell parameters.
        const FreeParameters scaled{unit_cell_params.beta2 / (H * H),
                                    unit_cell_params.beta3 / (H * H),
                                    unit_cell_params.beta4 / (H * H)};
        const Stencil9 st = solve_stencil(CellGeometry(H, h), scaled);
        std::array<double, 9> samples{};
        double magnitude = std::abs(exact);
        for (int p = 0; p < 9; ++p) {
            samples[static_cast<std::size_t>(p)] = u(x0 + st.dx(p), y0 + st.dy(p));
            magnitude += std::abs(st.coefficient(p) * samples[static_cast<std::size_t>(p)]);
        }
        const double err = std::abs(apply_stencil(st, samples) - exact);
        // Below the cancellation floor of the weighted sum the truncation
        // error is numerically zero.
        if (err > 1e-12 * magnitude) {
            log_h.push_back(std::log(H));
            log_e.push_back(std::log(err));
        }
    }

    if (log_h.size() < 2) return std::numeric_limits<double>::infinity();

    // Least-squares slope of log(err) against log(H).
    const double n = static_cast<double>(log_h.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < log_h.size(); ++k) {
        sx += log_h[k];
        sy += log_e[k];
        sxx += log_h[k] * log_h[k];
        sxy += log_h[k] * log_e[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace ninepoint
