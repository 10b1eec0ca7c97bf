#include "ninepoint/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "ninepoint/errors.hpp"

namespace ninepoint {

void lu_factor(Matrix& a, std::vector<int>& piv) {
    const int n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("lu_factor: matrix must be square");
    piv.assign(static_cast<std::size_t>(n), 0);

    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best < 1e-300) throw SingularMatrixError("lu_factor: pivot below 1e-300");
        piv[static_cast<std::size_t>(k)] = p;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        }
        const double inv_pivot = 1.0 / a(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double factor = a(i, k) * inv_pivot;
            a(i, k) = factor;
            if (factor != 0.0) {
                for (int j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
            }
        }
    }
}

void lu_solve(const Matrix& lu, const std::vector<int>& piv, std::vector<double>& b) {
    const int n = lu.rows();
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("lu_solve: size mismatch");

    // The factors are stored in fully pivoted row order; apply every swap to
    // the right-hand side before the triangular solves.
    for (int k = 0; k < n; ++k) {
        const int p = piv[static_cast<std::size_t>(k)];
        if (p != k) std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(p)]);
    }
    for (int k = 0; k < n; ++k) {
        const double bk = b[static_cast<std::size_t>(k)];
        if (bk != 0.0) {
            for (int i = k + 1; i < n; ++i) b[static_cast<std::size_t>(i)] -= lu(i, k) * bk;
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) acc -= lu(i, j) * b[static_cast<std::size_t>(j)];
        b[static_cast<std::size_t>(i)] = acc / lu(i, i);
    }
}

std::vector<double> dense_solve(const Matrix& a, const std::vector<double>& b) {
    Matrix lu = a;
    std::vector<int> piv;
    lu_factor(lu, piv);
    std::vector<double> x = b;
    lu_solve(lu, piv, x);
    return x;
}

Matrix invert(const Matrix& a) {
    const int n = a.rows();
    Matrix lu = a;
    std::vector<int> piv;
    lu_factor(lu, piv);

    Matrix inv(n, n);
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[static_cast<std::size_t>(j)] = 1.0;
        lu_solve(lu, piv, col);
        for (int i = 0; i < n; ++i) inv(i, j) = col[static_cast<std::size_t>(i)];
    }
    return inv;
}

} // namespace ninepoint
