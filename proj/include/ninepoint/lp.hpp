#pragma once

#include <array>
#include <vector>

namespace ninepoint {

/// One inequality a . y >= rhs in up to four variables.
struct LpConstraint {
    std::array<double, 4> a{};
    double rhs = 0.0;
};

struct LpSolution {
    bool found = false;
    std::array<double, 4> y{};
    double objective = 0.0;
    std::vector<int> active; // constraint indices defining the optimal vertex
};

/// Maximize c . y subject to the constraints by enumerating all basic
/// solutions (every dim-subset of constraints taken with equality) and keeping
/// the best feasible one. Ties in the objective are broken by lexicographic
/// order of y. scale_hint sets the magnitude used for tolerance scaling;
/// it should be the natural size of the constraint data.
LpSolution maximize_by_vertex_enumeration(int dim, const std::vector<LpConstraint>& constraints,
                                          const std::array<double, 4>& c, double scale_hint);

} // namespace ninepoint
