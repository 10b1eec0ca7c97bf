#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ninepoint {

/// Symmetric cell: the node sits in the middle of a 2H x 2h rectangle.
struct CellGeometry {
    double H; // half-spacing in x
    double h; // half-spacing in y

    CellGeometry(double H_, double h_) : H(H_), h(h_) {
        if (!(std::isfinite(H) && std::isfinite(h)) || H <= 0.0 || h <= 0.0) {
            throw std::invalid_argument("CellGeometry: spacings must be finite and positive");
        }
    }

    /// Aspect parameter s = h/H.
    double ratio() const { return h / H; }
};

/// Per-side spacings to the four axis neighbors. Reduces to CellGeometry
/// when both x-sides and both y-sides agree.
struct AsymmetricCellGeometry {
    double H_minus; // distance to left neighbor
    double H_plus;  // distance to right neighbor
    double h_minus; // distance to lower neighbor
    double h_plus;  // distance to upper neighbor

    AsymmetricCellGeometry(double Hm, double Hp, double hm, double hp)
        : H_minus(Hm), H_plus(Hp), h_minus(hm), h_plus(hp) {
        const bool finite = std::isfinite(Hm) && std::isfinite(Hp) &&
                            std::isfinite(hm) && std::isfinite(hp);
        if (!finite || Hm <= 0.0 || Hp <= 0.0 || hm <= 0.0 || hp <= 0.0) {
            throw std::invalid_argument(
                "AsymmetricCellGeometry: all four spacings must be finite and positive");
        }
    }

    static AsymmetricCellGeometry from_symmetric(const CellGeometry& g) {
        return AsymmetricCellGeometry(g.H, g.H, g.h, g.h);
    }

    bool is_symmetric() const { return H_minus == H_plus && h_minus == h_plus; }

    /// Largest spacing per direction; used for conservative classification.
    double H_bar() const { return std::max(H_minus, H_plus); }
    double h_bar() const { return std::max(h_minus, h_plus); }

    CellGeometry symmetrized() const { return CellGeometry(H_bar(), h_bar()); }
};

/// Local anisotropy ratio max(H/h, h/H) of the symmetrized cell.
inline double anisotropy_ratio(double H_bar, double h_bar) {
    return std::max(H_bar / h_bar, h_bar / H_bar);
}

inline double anisotropy_ratio(const AsymmetricCellGeometry& g) {
    return anisotropy_ratio(g.H_bar(), g.h_bar());
}

} // namespace ninepoint
