#pragma once

#include <cstddef>
#include <vector>

namespace ninepoint {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j)];
    }
    double operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j)];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// In-place LU factorization with partial pivoting. piv[k] is the row swapped
/// into position k. Throws SingularMatrixError when a pivot falls below 1e-300.
void lu_factor(Matrix& a, std::vector<int>& piv);

/// Solve LU x = b using a factorization from lu_factor; b is overwritten by x.
void lu_solve(const Matrix& lu, const std::vector<int>& piv, std::vector<double>& b);

/// Convenience one-shot solve of a square system by LU with partial pivoting.
std::vector<double> dense_solve(const Matrix& a, const std::vector<double>& b);

/// Dense inverse via LU; throws SingularMatrixError on singular input.
Matrix invert(const Matrix& a);

} // namespace ninepoint
