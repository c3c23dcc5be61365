#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fincast::linalg {

/// Dense row-major matrix of doubles. Just enough for the regression solves
/// in this toolkit.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws SingularDesign when a chosen pivot magnitude falls below
/// rel_tol times the largest pivot magnitude seen so far.
std::vector<double> solve_linear_system(Matrix a, std::vector<double> b, double rel_tol = 1e-10);

/// Ordinary least squares via the normal equations:
/// beta = (X'X)^-1 X'y, solved with `solve_linear_system`.
std::vector<double> solve_least_squares(const Matrix& design, std::span<const double> y,
                                        double rel_tol = 1e-10);

}  // namespace fincast::linalg
