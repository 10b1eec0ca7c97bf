#include "ninepoint/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "ninepoint/feasibility.hpp"

namespace ninepoint {

namespace {

void validate_nodes(const std::vector<double>& nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("Mesh1D: need at least two nodes");
    if (nodes.front() != 0.0 || nodes.back() != 1.0) {
        throw std::invalid_argument("Mesh1D: endpoints must be exactly 0 and 1");
    }
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        if (!std::isfinite(nodes[k]) || !(nodes[k] < nodes[k + 1])) {
            throw std::invalid_argument("Mesh1D: nodes must be finite and strictly increasing");
        }
    }
}

} // namespace

Mesh1D::Mesh1D(std::vector<double> n) : nodes(std::move(n)) { validate_nodes(nodes); }

Mesh1D uniform_mesh(int N) {
    if (N < 2) throw std::invalid_argument("uniform_mesh: N must be >= 2");
    std::vector<double> nodes(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) nodes[static_cast<std::size_t>(k)] = static_cast<double>(k) / static_cast<double>(N);
    nodes.front() = 0.0;
    nodes.back() = 1.0;
    return Mesh1D(std::move(nodes));
}

double shishkin_transition_point(const ShishkinSpec& spec) {
    return std::min(0.5, spec.sigma * spec.eps * std::log(static_cast<double>(spec.N)));
}

Mesh1D shishkin_mesh(const ShishkinSpec& spec) {
    if (spec.N < 4 || spec.N % 2 != 0) {
        throw std::invalid_argument("shishkin_mesh: N must be even and >= 4");
    }
    if (!(spec.eps > 0.0 && spec.eps <= 1.0) || !(spec.sigma > 0.0)) {
        throw std::invalid_argument("shishkin_mesh: need eps in (0,1] and sigma > 0");
    }

    const double tau = shishkin_transition_point(spec);
    if (tau == 0.5) return uniform_mesh(spec.N); // saturated transition: exactly uniform

    const int half = spec.N / 2;
    std::vector<double> nodes(static_cast<std::size_t>(spec.N) + 1);
    const double fine = tau / static_cast<double>(half);
    const double coarse = (1.0 - tau) / static_cast<double>(half);
    for (int k = 0; k <= half; ++k) nodes[static_cast<std::size_t>(k)] = fine * static_cast<double>(k);
    for (int k = 1; k <= half; ++k) {
        nodes[static_cast<std::size_t>(half + k)] = tau + coarse * static_cast<double>(k);
    }
    nodes[static_cast<std::size_t>(half)] = tau;
    nodes.front() = 0.0;
    nodes.back() = 1.0;

    if (spec.layer_side == LayerSide::High) {
        std::vector<double> mirrored(nodes.size());
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            mirrored[k] = 1.0 - nodes[nodes.size() - 1 - k];
        }
        mirrored.front() = 0.0;
        mirrored.back() = 1.0;
        nodes = std::move(mirrored);
    }
    return Mesh1D(std::move(nodes));
}

Mesh1D bakhvalov_mesh(int N, double eps, double sigma, double q) {
    if (N < 4) throw std::invalid_argument("bakhvalov_mesh: N must be >= 4");
    if (!(eps > 0.0 && eps <= 1.0) || !(sigma > 0.0) || !(q > 0.0 && q < 1.0)) {
        throw std::invalid_argument("bakhvalov_mesh: need eps in (0,1], sigma > 0, q in (0,1)");
    }

    const double se = sigma * eps;
    if (se >= q) return uniform_mesh(N); // layer covers the whole interval

    auto phi = [&](double t) { return -se * std::log(1.0 - t / q); };
    auto dphi = [&](double t) { return se / (q - t); };
    // C^1 matching point: tangent from (t0, phi(t0)) reaches 1 at t = 1.
    auto overshoot = [&](double t) { return phi(t) + dphi(t) * (1.0 - t) - 1.0; };

    double lo = 0.0;              // overshoot(0) = se/q - 1 < 0 here
    double hi = q * (1.0 - 1e-12); // overshoot -> +inf as t -> q
    if (!(overshoot(lo) < 0.0) || !(overshoot(hi) > 0.0)) {
        throw std::invalid_argument("bakhvalov_mesh: no C^1 matching point for these parameters");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * q; ++it) {
        const double mid = 0.5 * (lo + hi);
        (overshoot(mid) < 0.0 ? lo : hi) = mid;
    }
    const double t0 = 0.5 * (lo + hi);
    const double slope = dphi(t0);
    const double x0 = phi(t0);

    std::vector<double> nodes(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(N);
        nodes[static_cast<std::size_t>(k)] = t <= t0 ? phi(t) : x0 + slope * (t - t0);
    }
    nodes.front() = 0.0;
    nodes.back() = 1.0;
    return Mesh1D(std::move(nodes));
}

TensorMesh2D::TensorMesh2D(Mesh1D xm, Mesh1D ym) : x(std::move(xm)), y(std::move(ym)) {
    if (x.nodes.size() < 3 || y.nodes.size() < 3) {
        throw std::invalid_argument("TensorMesh2D: each direction needs at least one interior node");
    }
}

AsymmetricCellGeometry TensorMesh2D::cell(int i, int j) const {
    const auto& xs = x.nodes;
    const auto& ys = y.nodes;
    if (i < 1 || i > interior_x() || j < 1 || j > interior_y()) {
        throw std::out_of_range("TensorMesh2D::cell: not an interior node");
    }
    const std::size_t iu = static_cast<std::size_t>(i);
    const std::size_t ju = static_cast<std::size_t>(j);
    return AsymmetricCellGeometry(xs[iu] - xs[iu - 1], xs[iu + 1] - xs[iu],
                                  ys[ju] - ys[ju - 1], ys[ju + 1] - ys[ju]);
}

CellClassification classify_cells(const TensorMesh2D& mesh) {
    CellClassification out;
    out.n_interior = mesh.interior_count();
    out.rows.reserve(static_cast<std::size_t>(out.n_interior));

    // Feasibility depends only on the symmetrized spacings; cache per pair.
    std::map<std::pair<double, double>, bool> cache;
    auto feasible_for = [&cache](double H_bar, double h_bar) {
        const auto key = std::make_pair(H_bar, h_bar);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, is_feasible(CellGeometry(H_bar, h_bar))).first;
        }
        return it->second;
    };

    for (int i = 1; i <= mesh.interior_x(); ++i) {
        for (int j = 1; j <= mesh.interior_y(); ++j) {
            const AsymmetricCellGeometry cell = mesh.cell(i, j);
            CellClassification::Row row;
            row.i = i;
            row.j = j;
            row.H_minus = cell.H_minus;
            row.H_plus = cell.H_plus;
            row.h_minus = cell.h_minus;
            row.h_plus = cell.h_plus;
            row.ratio = anisotropy_ratio(cell);
            row.monotone_feasible = feasible_for(cell.H_bar(), cell.h_bar());
            if (!row.monotone_feasible) ++out.n_infeasible;
            out.max_ratio = std::max(out.max_ratio, row.ratio);
            out.rows.push_back(row);
        }
    }
    out.infeasible_fraction =
        out.n_interior > 0 ? static_cast<double>(out.n_infeasible) / static_cast<double>(out.n_interior) : 0.0;
    return out;
}

} // namespace ninepoint
