#include "ninepoint/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "ninepoint/errors.hpp"
#include "ninepoint/feasibility.hpp"

namespace ninepoint {

std::string to_string(StencilBranch b) {
    switch (b) {
    case StencilBranch::NinePointMaxMargin: return "nine-point-max-margin";
    case StencilBranch::NinePointExplicitFamily: return "nine-point-explicit-family";
    case StencilBranch::FivePointDropped: return "five-point-dropped";
    }
    return "unknown";
}

namespace {

// Classical three-point second-difference weights per direction; with the
// mixed moment dropped they reproduce the five-point scheme (zero corners).
FreeParameters five_point_params(const AsymmetricCellGeometry& g) {
    return FreeParameters{2.0 / (g.H_plus * (g.H_minus + g.H_plus)),
                          2.0 / (g.h_minus * (g.h_minus + g.h_plus)),
                          2.0 / (g.h_plus * (g.h_minus + g.h_plus))};
}

struct ParamCache {
    std::map<std::array<double, 4>, FreeParameters> margin;

    FreeParameters margin_params(const AsymmetricCellGeometry& g) {
        const std::array<double, 4> key{g.H_minus, g.H_plus, g.h_minus, g.h_plus};
        auto it = margin.find(key);
        if (it == margin.end()) {
            it = margin.emplace(key, monotonicity_margin(g).argmax_params).first;
        }
        return it->second;
    }
};

// Offsets of the nine sample points in grid indices, matching the stencil
// position map: center, 1..8.
constexpr int kDi[9] = {0, -1, 1, 0, 0, -1, 1, -1, 1};
constexpr int kDj[9] = {0, 0, 0, -1, 1, -1, -1, 1, 1};

} // namespace

AssembledSystem assemble(const TensorMesh2D& mesh, const SchemeStrategy& strategy) {
    AssembledSystem sys;
    sys.nx = mesh.interior_x();
    sys.ny = mesh.interior_y();
    sys.n = sys.nx * sys.ny;
    if (sys.n > kDenseLimit) {
        throw CapacityError("assemble: " + std::to_string(sys.n) + " unknowns exceed the dense cap of " +
                            std::to_string(kDenseLimit));
    }
    sys.matrix = Matrix(sys.n, sys.n);
    sys.provenance.reserve(static_cast<std::size_t>(sys.n));

    ParamCache cache;

    for (int i = 1; i <= sys.nx; ++i) {
        for (int j = 1; j <= sys.ny; ++j) {
            const AsymmetricCellGeometry cell = mesh.cell(i, j);
            const double ratio = anisotropy_ratio(cell);

            StencilBranch branch = StencilBranch::NinePointMaxMargin;
            FreeParameters params;
            double xy_target = 1.0;
            switch (strategy.kind) {
            case SchemeKind::MaxMargin:
                params = cache.margin_params(cell);
                break;
            case SchemeKind::ExplicitFamily: {
                const CellGeometry sym = cell.symmetrized();
                const double s = sym.ratio();
                if (s >= 0.5 && s <= 2.0) {
                    branch = StencilBranch::NinePointExplicitFamily;
                    params = explicit_family_params(sym);
                } else {
                    params = cache.margin_params(cell);
                }
                break;
            }
            case SchemeKind::Hybrid:
                if (ratio <= strategy.ratio_threshold) {
                    params = cache.margin_params(cell);
                } else {
                    branch = StencilBranch::FivePointDropped;
                    params = five_point_params(cell);
                    xy_target = 0.0;
                }
                break;
            }

            Stencil9 st = solve_stencil_mixed_target(cell, params, xy_target);

            const int row = sys.row_of(i, j);
            for (int k = 0; k < 9; ++k) {
                const int ni = i + kDi[k];
                const int nj = j + kDj[k];
                const double value = -st.coefficient(k); // matrix stores -L_h
                const bool interior = ni >= 1 && ni <= sys.nx && nj >= 1 && nj <= sys.ny;
                if (interior) {
                    sys.matrix(row, sys.row_of(ni, nj)) += value;
                } else {
                    // Dirichlet fold: the stencil coefficient moves to the
                    // right-hand side with its original sign.
                    sys.boundary_terms.push_back({row, ni, nj, st.coefficient(k)});
                }
            }
            sys.provenance.emplace_back(i, j, branch, ratio, params, std::move(st));
        }
    }
    return sys;
}

MMatrixReport m_matrix_check(const AssembledSystem& sys) {
    MMatrixReport report;
    const Matrix& a = sys.matrix;
    const int n = sys.n;

    double max_abs = 0.0;
    for (double v : a.data()) max_abs = std::max(max_abs, std::abs(v));
    report.tol_sign = 1e-12 * max_abs;

    report.sign_pattern_ok = true;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = a(i, j);
            const bool bad = i == j ? !(v > 0.0) : v > report.tol_sign;
            if (bad) {
                report.sign_pattern_ok = false;
                report.violations.push_back({i, j, v});
            }
        }
    }

    if (n <= kDenseLimit) {
        const Matrix inv = invert(a); // throws SingularMatrixError on breakdown
        double min_entry = std::numeric_limits<double>::infinity();
        double max_entry = 0.0;
        for (double v : inv.data()) {
            min_entry = std::min(min_entry, v);
            max_entry = std::max(max_entry, std::abs(v));
        }
        report.min_inverse_entry = min_entry;
        report.tol_inverse = 1e-9 * max_entry;
        report.inverse_nonneg = min_entry >= -report.tol_inverse;
    }
    return report;
}

DmpReport dmp_test(const AssembledSystem& sys, int trials, std::uint64_t seed) {
    DmpReport report;
    report.trials = trials;
    report.seed = seed;

    Matrix lu = sys.matrix;
    std::vector<int> piv;
    lu_factor(lu, piv); // throws SingularMatrixError on breakdown

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<double> f(static_cast<std::size_t>(sys.n));
    report.passed = true;
    for (int t = 0; t < trials; ++t) {
        for (double& v : f) v = unif(rng);
        std::vector<double> u = f;
        lu_solve(lu, piv, u);
        double min_u = 0.0;
        double max_abs = 0.0;
        for (double v : u) {
            min_u = std::min(min_u, v);
            max_abs = std::max(max_abs, std::abs(v));
        }
        const double violation = max_abs > 0.0 ? std::max(0.0, -min_u) / max_abs : 0.0;
        report.worst_violation = std::max(report.worst_violation, violation);
        if (violation <= 1e-10) {
            ++report.trials_passed;
        } else {
            report.passed = false;
        }
    }
    return report;
}

} // namespace ninepoint
