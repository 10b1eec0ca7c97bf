#include "ninepoint/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

namespace ninepoint {

namespace {

// Solve the dim x dim system M y = r by Gaussian elimination with partial
// pivoting. Returns false when the subset is (numerically) rank deficient.
bool solve_small(int dim, double m[4][4], double r[4], double y[4]) {
    int idx[4] = {0, 1, 2, 3};
    for (int k = 0; k < dim; ++k) {
        int p = k;
        double best = std::abs(m[idx[k]][k]);
        for (int i = k + 1; i < dim; ++i) {
            const double v = std::abs(m[idx[i]][k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        double row_scale = 0.0;
        for (int j = 0; j < dim; ++j) row_scale = std::max(row_scale, std::abs(m[idx[p]][j]));
        if (best <= 1e-12 * (row_scale + 1e-300)) return false;
        std::swap(idx[k], idx[p]);
        for (int i = k + 1; i < dim; ++i) {
            const double f = m[idx[i]][k] / m[idx[k]][k];
            m[idx[i]][k] = 0.0;
            for (int j = k + 1; j < dim; ++j) m[idx[i]][j] -= f * m[idx[k]][j];
            r[idx[i]] -= f * r[idx[k]];
        }
    }
    for (int i = dim - 1; i >= 0; --i) {
        double acc = r[idx[i]];
        for (int j = i + 1; j < dim; ++j) acc -= m[idx[i]][j] * y[j];
        y[i] = acc / m[idx[i]][i];
    }
    return true;
}

bool lexicographically_smaller(const std::array<double, 4>& a, const std::array<double, 4>& b,
                               int dim, double tol) {
    for (int k = 0; k < dim; ++k) {
        if (a[static_cast<std::size_t>(k)] < b[static_cast<std::size_t>(k)] - tol) return true;
        if (a[static_cast<std::size_t>(k)] > b[static_cast<std::size_t>(k)] + tol) return false;
    }
    return false;
}

} // namespace

LpSolution maximize_by_vertex_enumeration(int dim, const std::vector<LpConstraint>& constraints,
                                          const std::array<double, 4>& c, double scale_hint) {
    LpSolution best;
    const int n = static_cast<int>(constraints.size());
    if (dim < 1 || dim > 4 || n < dim) return best;

    const double tie_tol = 1e-12 * (std::abs(scale_hint) + 1e-300);
    // Feasibility tolerance floor at the problem scale; a purely per-constraint
    // relative tolerance underflows rounding noise when a constraint's own
    // terms nearly cancel.
    double rhs_scale = 0.0;
    for (const LpConstraint& con : constraints) rhs_scale = std::max(rhs_scale, std::abs(con.rhs));
    const double floor_tol = 1e-13 * (std::abs(scale_hint) + rhs_scale + 1e-300);

    int pick[4] = {0, 1, 2, 3};
    // Enumerate dim-subsets in lexicographic order.
    for (int i = 0; i < dim; ++i) pick[i] = i;
    while (true) {
        double m[4][4];
        double r[4];
        for (int row = 0; row < dim; ++row) {
            const LpConstraint& con = constraints[static_cast<std::size_t>(pick[row])];
            for (int col = 0; col < dim; ++col) m[row][col] = con.a[static_cast<std::size_t>(col)];
            r[row] = con.rhs;
        }
        double y[4] = {0.0, 0.0, 0.0, 0.0};
        if (solve_small(dim, m, r, y)) {
            bool feasible = true;
            for (const LpConstraint& con : constraints) {
                double lhs = 0.0;
                double mag = std::abs(con.rhs);
                for (int k = 0; k < dim; ++k) {
                    const double term = con.a[static_cast<std::size_t>(k)] * y[k];
                    lhs += term;
                    mag += std::abs(term);
                }
                if (lhs < con.rhs - (1e-11 * mag + floor_tol)) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                double obj = 0.0;
                for (int k = 0; k < dim; ++k) obj += c[static_cast<std::size_t>(k)] * y[k];
                std::array<double, 4> yv{};
                for (int k = 0; k < dim; ++k) yv[static_cast<std::size_t>(k)] = y[k];

                bool take = false;
                if (!best.found || obj > best.objective + tie_tol) {
                    take = true;
                } else if (obj >= best.objective - tie_tol &&
                           lexicographically_smaller(yv, best.y, dim, tie_tol)) {
                    take = true;
                }
                if (take) {
                    best.found = true;
                    best.objective = obj;
                    best.y = yv;
                    best.active.assign(pick, pick + dim);
                }
            }
        }

        // Advance the subset.
        int pos = dim - 1;
        while (pos >= 0 && pick[pos] == n - dim + pos) --pos;
        if (pos < 0) break;
        ++pick[pos];
        for (int k = pos + 1; k < dim; ++k) pick[k] = pick[k - 1] + 1;
    }
    return best;
}

} // namespace ninepoint
