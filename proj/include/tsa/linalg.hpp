#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tsa/errors.hpp"

namespace tsa {

/// Minimal dense row-major matrix; just enough for the regression and
/// Hessian work in this toolkit.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

namespace detail {

/// In-place Householder QR of A (rows >= cols). On return the upper triangle
/// of A holds R; the reflectors are applied to y as they are formed. Rank
/// deficiency is flagged when a diagonal of R falls below tol relative to
/// the largest one.
inline void householder_qr_apply(Matrix& A, std::vector<double>& y, double rel_tol = 1e-12) {
    const std::size_t m = A.rows(), n = A.cols();
    if (m < n) throw std::invalid_argument("QR requires rows >= cols");
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += A(i, k) * A(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;  // caught by the rank check below
        if (A(k, k) > 0) norm = -norm;
        for (std::size_t i = k; i < m; ++i) A(i, k) /= norm;
        A(k, k) -= 1.0;
        // apply reflector H = I - v v^T / v_k to trailing columns and to y
        for (std::size_t j = k + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += A(i, k) * A(i, j);
            s /= A(k, k);
            for (std::size_t i = k; i < m; ++i) A(i, j) += s * A(i, k);
        }
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i) s += A(i, k) * y[i];
        s /= A(k, k);
        for (std::size_t i = k; i < m; ++i) y[i] += s * A(i, k);
        A(k, k) = norm;  // diagonal of R
    }
    double max_diag = 0.0;
    for (std::size_t k = 0; k < n; ++k) max_diag = std::max(max_diag, std::abs(A(k, k)));
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(A(k, k)) <= rel_tol * max_diag)
            throw NumericError("rank-deficient design matrix (pivot " + std::to_string(k) + ")");
}

}  // namespace detail

/// Invert a symmetric matrix by Gauss-Jordan elimination with partial
/// pivoting. Throws NumericError when singular to working precision.
inline Matrix invert_symmetric(const Matrix& src) {
    const std::size_t n = src.rows();
    if (src.cols() != n) throw std::invalid_argument("invert_symmetric needs a square matrix");
    Matrix a = src;
    Matrix inv(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) <= 1e-14 * scale)
            throw NumericError("singular matrix in invert_symmetric");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(col, j), a(piv, j));
                std::swap(inv(col, j), inv(piv, j));
            }
        const double d = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

}  // namespace tsa
