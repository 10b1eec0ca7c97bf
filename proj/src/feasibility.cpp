#include "ninepoint/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ninepoint/lp.hpp"

namespace ninepoint {

double StencilAffineMap::min_beta(const FreeParameters& p) const {
    double m = beta(0, p);
    for (int i = 1; i < 8; ++i) m = std::min(m, beta(i, p));
    return m;
}

double StencilAffineMap::lipschitz() const {
    double worst = 0.0;
    for (const auto& g : grad) {
        worst = std::max(worst, std::abs(g[0]) + std::abs(g[1]) + std::abs(g[2]));
    }
    return worst;
}

StencilAffineMap stencil_affine_map(const AsymmetricCellGeometry& geom) {
    StencilAffineMap map;
    if (geom.is_symmetric()) {
        const double H = geom.H_plus;
        const double h = geom.h_plus;
        const double ix = 2.0 / (H * H);
        const double iy = 2.0 / (h * h);
        const double c = 1.0 / (h * H);

        map.base = {ix - iy, 0.0, 0.0, 0.0,
                    (2.0 * iy - ix + c) / 4.0, (ix - c) / 4.0,
                    (2.0 * iy - ix - c) / 4.0, (ix + c) / 4.0};
        map.grad = {{{-1.0, 1.0, 1.0},
                     {1.0, 0.0, 0.0},
                     {0.0, 1.0, 0.0},
                     {0.0, 0.0, 1.0},
                     {0.5, -0.75, -0.25},
                     {-0.5, -0.25, 0.25},
                     {0.5, -0.25, -0.75},
                     {-0.5, 0.25, -0.25}}};
        return map;
    }

    // General cell: probe the linear solver with the origin and the three
    // parameter unit vectors.
    const Stencil9 origin = solve_stencil_asymmetric(geom, FreeParameters{0.0, 0.0, 0.0});
    for (int i = 0; i < 8; ++i) map.base[static_cast<std::size_t>(i)] = origin.beta[static_cast<std::size_t>(i)];
    for (int j = 0; j < 3; ++j) {
        FreeParameters e{};
        (j == 0 ? e.beta2 : j == 1 ? e.beta3 : e.beta4) = 1.0;
        const Stencil9 probe = solve_stencil_asymmetric(geom, e);
        for (int i = 0; i < 8; ++i) {
            map.grad[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                probe.beta[static_cast<std::size_t>(i)] - map.base[static_cast<std::size_t>(i)];
        }
    }
    return map;
}

namespace {

// Run a vertex-enumeration LP with a symmetric box on all variables, growing
// the box until no box bound is active at the optimum. The box exists only to
// keep the enumeration finite; it must never clip the reported optimum.
LpSolution solve_boxed(int dim, const std::vector<LpConstraint>& structural,
                       const std::array<double, 4>& c, double box0, double scale_hint) {
    double box = box0;
    const int n_structural = static_cast<int>(structural.size());
    for (int attempt = 0; attempt < 5; ++attempt) {
        std::vector<LpConstraint> cons = structural;
        for (int k = 0; k < dim; ++k) {
            LpConstraint lo{};
            lo.a[static_cast<std::size_t>(k)] = 1.0;
            lo.rhs = -box;
            cons.push_back(lo);
            LpConstraint hi{};
            hi.a[static_cast<std::size_t>(k)] = -1.0;
            hi.rhs = -box;
            cons.push_back(hi);
        }
        LpSolution sol = maximize_by_vertex_enumeration(dim, cons, c, scale_hint);
        if (!sol.found) {
            // Box too small to contain any feasible point; widen and retry.
            box *= 16.0;
            continue;
        }
        bool box_active = false;
        for (int idx : sol.active) box_active = box_active || idx >= n_structural;
        for (int k = 0; k < dim; ++k) {
            box_active = box_active || std::abs(sol.y[static_cast<std::size_t>(k)]) > 0.999 * box;
        }
        if (!box_active) return sol;
        box *= 16.0;
    }
    throw std::logic_error("boxed LP: box bound still active after expansion");
}

// Generous starting box for the free parameters: the optimizer components
// scale with the inverse squares of the smallest spacings.
double parameter_box(const AsymmetricCellGeometry& geom) {
    const double H_min = std::min(geom.H_minus, geom.H_plus);
    const double h_min = std::min(geom.h_minus, geom.h_plus);
    return 8.0 * (1.0 / (h_min * h_min) + 1.0 / (H_min * H_min) + 1.0 / (h_min * H_min));
}

FeasibilityReport margin_from_map(const StencilAffineMap& map, const AsymmetricCellGeometry& geom) {
    const double H_bar = geom.H_bar();
    const double h_bar = geom.h_bar();
    const double scale = 1.0 / (h_bar * H_bar);
    const double box0 = parameter_box(geom);

    // Variables (b2, b3, b4, t); maximize t subject to beta_i >= t.
    std::vector<LpConstraint> structural;
    structural.reserve(8);
    for (int i = 0; i < 8; ++i) {
        LpConstraint con{};
        con.a = {map.grad[static_cast<std::size_t>(i)][0], map.grad[static_cast<std::size_t>(i)][1],
                 map.grad[static_cast<std::size_t>(i)][2], -1.0};
        con.rhs = -map.base[static_cast<std::size_t>(i)];
        structural.push_back(con);
    }

    const LpSolution lp = solve_boxed(4, structural, {0.0, 0.0, 0.0, 1.0}, box0, scale);

    FeasibilityReport report;
    report.argmax_params = FreeParameters{lp.y[0], lp.y[1], lp.y[2]};
    // Report the achieved minimum at the arg max, a certified value, instead
    // of the raw LP objective.
    report.margin = map.min_beta(report.argmax_params);
    report.feasible = report.margin >= -feasibility_tolerance(H_bar, h_bar);
    for (int i = 0; i < 8; ++i) {
        if (map.beta(i, report.argmax_params) <= report.margin + 1e-9 * scale) {
            report.binding_indices.push_back(i + 1);
        }
    }
    return report;
}

} // namespace

FeasibilityReport monotonicity_margin(const AsymmetricCellGeometry& geom) {
    return margin_from_map(stencil_affine_map(geom), geom);
}

FeasibilityReport monotonicity_margin(const CellGeometry& geom) {
    return monotonicity_margin(AsymmetricCellGeometry::from_symmetric(geom));
}

bool is_feasible(const CellGeometry& geom) { return monotonicity_margin(geom).feasible; }

double feasibility_threshold() {
    double lo = 1.0;  // feasible
    double hi = 4.0;  // infeasible
    if (!is_feasible(CellGeometry(lo, 1.0)) || is_feasible(CellGeometry(hi, 1.0))) {
        throw std::logic_error("feasibility_threshold: bracket failure");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (is_feasible(CellGeometry(mid, 1.0)) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

FreeParameters explicit_family_params(const CellGeometry& geom) {
    const double s = geom.ratio();
    if (!(s >= 0.5 && s <= 2.0)) {
        throw std::domain_error("explicit_family: aspect ratio h/H must lie in [1/2, 2]");
    }
    const double half_c = 1.0 / (2.0 * geom.h * geom.H);
    return FreeParameters{1.0 / (geom.H * geom.H) - half_c,
                          1.0 / (geom.h * geom.h) - half_c,
                          1.0 / (geom.h * geom.h) - half_c};
}

Stencil9 explicit_family(const CellGeometry& geom) {
    return solve_stencil(geom, explicit_family_params(geom));
}

double brute_force_margin(const CellGeometry& geom, const BruteForceGrid& grid) {
    if (grid.resolution < 20) {
        throw std::invalid_argument("brute_force_margin: resolution must be >= 20 per axis");
    }
    const double c = 1.0 / (geom.h * geom.H);
    const double lo = grid.has_box ? grid.lo : -2.0 * c;
    const double hi = grid.has_box ? grid.hi : 4.0 * c;
    if (!(hi > lo)) throw std::invalid_argument("brute_force_margin: empty grid box");

    const StencilAffineMap map = stencil_affine_map(AsymmetricCellGeometry::from_symmetric(geom));
    const double step = (hi - lo) / static_cast<double>(grid.resolution - 1);

    double best = -std::numeric_limits<double>::infinity();
    FreeParameters p{};
    for (int a = 0; a < grid.resolution; ++a) {
        p.beta2 = lo + step * static_cast<double>(a);
        for (int b = 0; b < grid.resolution; ++b) {
            p.beta3 = lo + step * static_cast<double>(b);
            for (int d = 0; d < grid.resolution; ++d) {
                p.beta4 = lo + step * static_cast<double>(d);
                best = std::max(best, map.min_beta(p));
            }
        }
    }
    return best;
}

std::vector<MarginSweepRow> margin_sweep(const std::vector<double>& ratios) {
    for (double r : ratios) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw std::invalid_argument("margin_sweep: ratios must be positive and finite");
        }
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());

    std::vector<MarginSweepRow> rows;
    rows.reserve(sorted.size());
    for (double r : sorted) {
        const CellGeometry geom(r, 1.0);
        const FeasibilityReport rep = monotonicity_margin(geom);
        rows.push_back({r, rep.margin * geom.h * geom.H, rep.feasible});
    }
    return rows;
}

double beta6_cap(const CellGeometry& geom) {
    const AsymmetricCellGeometry cell = AsymmetricCellGeometry::from_symmetric(geom);
    const StencilAffineMap map = stencil_affine_map(cell);
    const double scale = 1.0 / (geom.h * geom.H);
    const double box0 = parameter_box(cell);

    // Variables (b2, b3, b4); maximize beta6 subject to beta_i >= 0, i != 6.
    std::vector<LpConstraint> structural;
    for (int i = 0; i < 8; ++i) {
        if (i == 5) continue;
        LpConstraint con{};
        con.a = {map.grad[static_cast<std::size_t>(i)][0], map.grad[static_cast<std::size_t>(i)][1],
                 map.grad[static_cast<std::size_t>(i)][2], 0.0};
        con.rhs = -map.base[static_cast<std::size_t>(i)];
        structural.push_back(con);
    }
    const std::array<double, 4> objective = {map.grad[5][0], map.grad[5][1], map.grad[5][2], 0.0};
    const LpSolution lp = solve_boxed(3, structural, objective, box0, scale);
    return map.beta(5, FreeParameters{lp.y[0], lp.y[1], lp.y[2]});
}

} // namespace ninepoint
