#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ninepoint/linalg.hpp"
#include "ninepoint/mesh.hpp"
#include "ninepoint/stencil.hpp"

namespace ninepoint {

enum class SchemeKind {
    MaxMargin,      // per node, margin-optimal free parameters
    ExplicitFamily, // closed-form witness where the ratio allows it, MaxMargin elsewhere
    Hybrid,         // consistent nine-point below the ratio threshold; elsewhere the
                    // mixed-derivative condition is dropped (five-point-compatible row)
};

struct SchemeStrategy {
    SchemeKind kind = SchemeKind::MaxMargin;
    double ratio_threshold = 2.0; // used by Hybrid

    static SchemeStrategy max_margin() { return {SchemeKind::MaxMargin, 2.0}; }
    static SchemeStrategy explicit_family() { return {SchemeKind::ExplicitFamily, 2.0}; }
    static SchemeStrategy hybrid(double threshold = 2.0) { return {SchemeKind::Hybrid, threshold}; }
};

enum class StencilBranch {
    NinePointMaxMargin,
    NinePointExplicitFamily,
    FivePointDropped,
};

std::string to_string(StencilBranch b);

struct NodeProvenance {
    int i = 0;
    int j = 0;
    StencilBranch branch = StencilBranch::NinePointMaxMargin;
    double ratio = 0.0;
    FreeParameters params;
    Stencil9 stencil;

    NodeProvenance(int i_, int j_, StencilBranch b, double r, const FreeParameters& p, Stencil9 st)
        : i(i_), j(j_), branch(b), ratio(r), params(p), stencil(std::move(st)) {}
};

/// Coefficient that multiplies the Dirichlet value at boundary node (bi, bj)
/// on the right-hand side of the given interior row.
struct BoundaryTerm {
    int row = 0;
    int bi = 0;
    int bj = 0;
    double weight = 0.0;
};

/// Global dense matrix of -L_h on the interior nodes, Dirichlet values folded
/// out. Rows/columns are ordered lexicographically in (i, j) with j fastest.
struct AssembledSystem {
    int nx = 0; // interior nodes in x
    int ny = 0; // interior nodes in y
    int n = 0;  // nx * ny
    Matrix matrix;
    std::vector<NodeProvenance> provenance; // one entry per row, row order
    std::vector<BoundaryTerm> boundary_terms;

    int row_of(int i, int j) const { return (i - 1) * ny + (j - 1); }
};

inline constexpr int kDenseLimit = 4096;

AssembledSystem assemble(const TensorMesh2D& mesh, const SchemeStrategy& strategy);

struct MMatrixReport {
    bool sign_pattern_ok = false;
    struct Violation {
        int row = 0;
        int col = 0;
        double value = 0.0;
    };
    std::vector<Violation> violations; // positive off-diagonals / nonpositive diagonals
    std::optional<bool> inverse_nonneg;
    double min_inverse_entry = 0.0;
    double tol_sign = 0.0;
    double tol_inverse = 0.0;
};

/// Sign-pattern check of -L_h (diagonal > 0, off-diagonal <= 0 up to rounding)
/// plus, within the dense cap, the entrywise sign of the explicit inverse.
MMatrixReport m_matrix_check(const AssembledSystem& sys);

struct DmpReport {
    bool passed = false;
    double worst_violation = 0.0; // max over trials of (-min u)/||u||_inf, clamped at 0
    int trials = 0;
    int trials_passed = 0;
    std::uint64_t seed = 0;
};

/// Discrete-maximum-principle stress test: solve (-L_h)u = f for seeded random
/// f >= 0 and zero boundary data; every solution must be nonnegative up to
/// 1e-10 * ||u||_inf.
DmpReport dmp_test(const AssembledSystem& sys, int trials, std::uint64_t seed);

} // namespace ninepoint
