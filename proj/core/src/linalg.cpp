#include "fincast/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fincast/errors.hpp"

namespace fincast::linalg {

std::vector<double> solve_linear_system(Matrix a, std::vector<double> b, double rel_tol) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n || b.size() != n)
        throw ShapeError("solve_linear_system: matrix must be square and match rhs");

    double max_pivot = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot_row = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a.at(i, k)) > std::abs(a.at(pivot_row, k))) pivot_row = i;

        const double pivot = a.at(pivot_row, k);
        max_pivot = std::max(max_pivot, std::abs(pivot));
        if (std::abs(pivot) <= rel_tol * max_pivot || pivot == 0.0)
            throw SingularDesign("solve_linear_system: pivot below threshold at column " +
                                 std::to_string(k));

        if (pivot_row != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a.at(k, j), a.at(pivot_row, j));
            std::swap(b[k], b[pivot_row]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = a.at(i, k) / pivot;
            if (factor == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a.at(i, j) -= factor * a.at(k, j);
            b[i] -= factor * b[k];
        }
    }

    std::vector<double> x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= a.at(ii, j) * x[j];
        x[ii] = acc / a.at(ii, ii);
    }
    return x;
}

std::vector<double> solve_least_squares(const Matrix& design, std::span<const double> y,
                                        double rel_tol) {
    const std::size_t rows = design.rows();
    const std::size_t cols = design.cols();
    if (y.size() != rows) throw ShapeError("solve_least_squares: rhs length mismatch");
    if (rows < cols) throw InsufficientData("solve_least_squares: underdetermined system");

    Matrix gram(cols, cols);
    std::vector<double> rhs(cols, 0.0);
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = i; j < cols; ++j) {
            double acc = 0.0;
            for (std::size_t r = 0; r < rows; ++r) acc += design.at(r, i) * design.at(r, j);
            gram.at(i, j) = acc;
            gram.at(j, i) = acc;
        }
        double acc = 0.0;
        for (std::size_t r = 0; r < rows; ++r) acc += design.at(r, i) * y[r];
        rhs[i] = acc;
    }
    return solve_linear_system(std::move(gram), std::move(rhs), rel_tol);
}

}  // namespace fincast::linalg
