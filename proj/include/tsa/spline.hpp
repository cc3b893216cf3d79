#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tsa/errors.hpp"
#include "tsa/series.hpp"

namespace tsa {

/// End conditions closing the piecewise-cubic constraint system. `natural`
/// zeroes the second derivative at both ends, `not_a_knot` forces the third
/// derivative to be continuous across the first and last interior knots,
/// `periodic` matches first and second derivatives at the two ends (and
/// requires equal endpoint ordinates).
enum class BoundaryCondition { natural, not_a_knot, periodic };

inline std::string to_string(BoundaryCondition b) {
    switch (b) {
        case BoundaryCondition::natural: return "natural";
        case BoundaryCondition::not_a_knot: return "not_a_knot";
        case BoundaryCondition::periodic: return "periodic";
    }
    return "?";
}

inline BoundaryCondition boundary_from_string(const std::string& s) {
    if (s == "natural") return BoundaryCondition::natural;
    if (s == "not_a_knot" || s == "not-a-knot") return BoundaryCondition::not_a_knot;
    if (s == "periodic") return BoundaryCondition::periodic;
    throw std::invalid_argument("unknown boundary condition '" + s +
                                "' (expected natural, not_a_knot, or periodic)");
}

/// Piecewise cubic interpolant. Interval i carries coefficients of
///   S_i(x) = a*(x - x_i)^3 + b*(x - x_i)^2 + c*(x - x_i) + d
/// in the local variable u = x - x_i; the shifted form avoids the
/// cancellation the global monomial basis suffers at large abscissae.
/// global_coefficients() expands a piece into global-x monomial form.
struct CubicSpline {
    struct Piece {
        double a, b, c, d;
    };
    std::vector<double> knots_x;
    std::vector<Piece> pieces;  // knots_x.size() - 1 entries
    BoundaryCondition boundary = BoundaryCondition::natural;

    /// Coefficients (A,B,C,D) of piece i written as A x^3 + B x^2 + C x + D.
    /// Expanded in extended precision; the conversion still loses accuracy
    /// at large abscissae, which is why evaluation uses the shifted form.
    std::array<double, 4> global_coefficients(std::size_t i) const {
        const Piece& p = pieces[i];
        const long double a = p.a, b = p.b, c = p.c, d = p.d;
        const long double x0 = knots_x[i];
        return {static_cast<double>(a), static_cast<double>(b - 3.0L * a * x0),
                static_cast<double>(c - 2.0L * b * x0 + 3.0L * a * x0 * x0),
                static_cast<double>(d - c * x0 + b * x0 * x0 - a * x0 * x0 * x0)};
    }
};

/// Thomas algorithm for A x = rhs with A tridiagonal (diag length n, sub and
/// sup length n-1). No pivoting; a vanishing pivot is reported as a
/// NumericError.
inline std::vector<double> solve_tridiagonal(const std::vector<double>& sub,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& sup,
                                             const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0) throw std::invalid_argument("empty tridiagonal system");
    if (sub.size() != n - 1 || sup.size() != n - 1 || rhs.size() != n)
        throw std::invalid_argument("tridiagonal band lengths inconsistent with diagonal");

    double scale = 0.0;
    for (double v : diag) scale = std::max(scale, std::abs(v));
    for (double v : sub) scale = std::max(scale, std::abs(v));
    for (double v : sup) scale = std::max(scale, std::abs(v));
    const double tiny = scale * 1e-14;

    std::vector<double> c(n - 1 > 0 ? n - 1 : 0), x(n);
    double beta = diag[0];
    if (std::abs(beta) <= tiny) throw NumericError("zero pivot in tridiagonal solve (row 0)");
    x[0] = rhs[0] / beta;
    for (std::size_t i = 1; i < n; ++i) {
        c[i - 1] = sup[i - 1] / beta;
        beta = diag[i] - sub[i - 1] * c[i - 1];
        if (std::abs(beta) <= tiny)
            throw NumericError("zero pivot in tridiagonal solve (row " + std::to_string(i) + ")");
        x[i] = (rhs[i] - sub[i - 1] * x[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

namespace detail {

/// Cyclic tridiagonal solve (corner entries a[n-1] bottom-left and c[n-1]
/// top-right) via Sherman-Morrison on top of solve_tridiagonal. Sizes below
/// three fall back to a direct dense elimination.
inline std::vector<double> solve_cyclic_tridiagonal(std::vector<double> sub,
                                                    std::vector<double> diag,
                                                    std::vector<double> sup,
                                                    double corner_bottom_left,
                                                    double corner_top_right,
                                                    const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 1) {
        const double piv = diag[0] + corner_bottom_left + corner_top_right;
        if (piv == 0.0) throw NumericError("singular cyclic system");
        return {rhs[0] / piv};
    }
    if (n <= 3) {
        // dense Gaussian elimination with partial pivoting
        std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            m[i][i] = diag[i];
            if (i + 1 < n) {
                m[i][i + 1] += sup[i];
                m[i + 1][i] += sub[i];
            }
            m[i][n] = rhs[i];
        }
        m[0][n - 1] += corner_top_right;
        m[n - 1][0] += corner_bottom_left;
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            if (std::abs(m[piv][col]) < 1e-300) throw NumericError("singular cyclic system");
            std::swap(m[col], m[piv]);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col) continue;
                const double f = m[r][col] / m[col][col];
                for (std::size_t cc = col; cc <= n; ++cc) m[r][cc] -= f * m[col][cc];
            }
        }
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
        return x;
    }

    const double gamma = -diag[0];
    std::vector<double> d2 = diag;
    d2[0] -= gamma;
    d2[n - 1] -= corner_top_right * corner_bottom_left / gamma;
    std::vector<double> u(n, 0.0), z, y;
    u[0] = gamma;
    u[n - 1] = corner_bottom_left;
    y = solve_tridiagonal(sub, d2, sup, rhs);
    z = solve_tridiagonal(sub, d2, sup, u);
    const double vy = y[0] + corner_top_right / gamma * y[n - 1];
    const double vz = z[0] + corner_top_right / gamma * z[n - 1];
    const double factor = vy / (1.0 + vz);
    for (std::size_t i = 0; i < n; ++i) y[i] -= factor * z[i];
    return y;
}

}  // namespace detail

/// Interpolating cubic spline through (xs, ys) with the requested end
/// condition. Solves for the knot second derivatives (moments) and converts
/// to per-interval shifted monomial coefficients. Two points degrade to the
/// chord; not_a_knot needs at least four.
inline CubicSpline fit_cubic_spline(const std::vector<double>& xs, const std::vector<double>& ys,
                                    BoundaryCondition boundary) {
    const std::size_t n = xs.size();
    if (n != ys.size()) throw std::invalid_argument("xs and ys must have equal length");
    if (n < 2) throw std::invalid_argument("spline needs at least 2 points");
    if (boundary == BoundaryCondition::not_a_knot && n < 4)
        throw std::invalid_argument("not_a_knot boundary needs at least 4 points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("knot abscissae must be strictly increasing");
    if (boundary == BoundaryCondition::periodic) {
        const double scale = std::max({1.0, std::abs(ys.front()), std::abs(ys.back())});
        if (std::abs(ys.front() - ys.back()) > 1e-12 * scale)
            throw std::invalid_argument("periodic boundary requires equal endpoint ordinates");
    }

    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = xs[i + 1] - xs[i];

    // second-divided-difference right-hand side of the moment equations
    auto rhs_at = [&](std::size_t i) {
        return (ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1];
    };

    std::vector<double> m(n, 0.0);  // knot moments S''(x_i)

    if (n == 2) {
        // chord; all moments zero
    } else if (boundary == BoundaryCondition::natural) {
        const std::size_t k = n - 2;  // unknowns m[1..n-2]
        std::vector<double> sub(k - 1), diag(k), sup(k - 1), rhs(k);
        for (std::size_t i = 0; i < k; ++i) {
            diag[i] = (h[i] + h[i + 1]) / 3.0;
            rhs[i] = rhs_at(i + 1);
            if (i + 1 < k) {
                sup[i] = h[i + 1] / 6.0;
                sub[i] = h[i + 1] / 6.0;
            }
        }
        const auto sol = solve_tridiagonal(sub, diag, sup, rhs);
        for (std::size_t i = 0; i < k; ++i) m[i + 1] = sol[i];
    } else if (boundary == BoundaryCondition::not_a_knot) {
        // Eliminate m0 and m_{n-1} with the third-derivative continuity
        // relations m0 = ((h0+h1) m1 - h0 m2)/h1 (and mirrored at the right
        // end), leaving a tridiagonal system in m[1..n-2].
        const std::size_t k = n - 2;
        std::vector<double> sub(k - 1), diag(k), sup(k - 1), rhs(k);
        for (std::size_t i = 0; i < k; ++i) {
            diag[i] = (h[i] + h[i + 1]) / 3.0;
            rhs[i] = rhs_at(i + 1);
            if (i + 1 < k) {
                sup[i] = h[i + 1] / 6.0;
                sub[i] = h[i + 1] / 6.0;
            }
        }
        diag[0] += (h[0] / 6.0) * (h[0] + h[1]) / h[1];
        if (k > 1)
            sup[0] += -(h[0] / 6.0) * h[0] / h[1];
        diag[k - 1] += (h[n - 2] / 6.0) * (h[n - 2] + h[n - 3]) / h[n - 3];
        if (k > 1)
            sub[k - 2] += -(h[n - 2] / 6.0) * h[n - 2] / h[n - 3];
        const auto sol = solve_tridiagonal(sub, diag, sup, rhs);
        for (std::size_t i = 0; i < k; ++i) m[i + 1] = sol[i];
        m[0] = ((h[0] + h[1]) * m[1] - h[0] * m[2]) / h[1];
        m[n - 1] = ((h[n - 2] + h[n - 3]) * m[n - 2] - h[n - 2] * m[n - 3]) / h[n - 3];
    } else {  // periodic
        // unknowns m[0..n-2] with the seam equation written at knot 0;
        // m[n-1] = m[0]
        const std::size_t k = n - 1;
        std::vector<double> sub(k > 1 ? k - 1 : 0), diag(k), sup(k > 1 ? k - 1 : 0), rhs(k);
        const double h_last = h[n - 2];
        diag[0] = (h_last + h[0]) / 3.0;
        rhs[0] = (ys[1] - ys[0]) / h[0] - (ys[n - 1] - ys[n - 2]) / h_last;
        for (std::size_t i = 1; i < k; ++i) {
            diag[i] = (h[i - 1] + h[i]) / 3.0;
            rhs[i] = rhs_at(i);
        }
        for (std::size_t i = 0; i + 1 < k; ++i) {
            sup[i] = h[i] / 6.0;
            sub[i] = h[i] / 6.0;
        }
        const auto sol = detail::solve_cyclic_tridiagonal(sub, diag, sup, h_last / 6.0,
                                                          h_last / 6.0, rhs);
        for (std::size_t i = 0; i < k; ++i) m[i] = sol[i];
        m[n - 1] = m[0];
    }

    CubicSpline s;
    s.knots_x = xs;
    s.boundary = boundary;
    s.pieces.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double hi = h[i];
        s.pieces[i].d = ys[i];
        s.pieces[i].b = m[i] / 2.0;
        s.pieces[i].a = (m[i + 1] - m[i]) / (6.0 * hi);
        s.pieces[i].c = (ys[i + 1] - ys[i]) / hi - hi * (2.0 * m[i] + m[i + 1]) / 6.0;
    }
    return s;
}

/// Evaluate S(x). x must lie within the knot range; there is no
/// extrapolation.
inline double evaluate(const CubicSpline& s, double x) {
    if (s.knots_x.size() < 2) throw std::invalid_argument("spline has no intervals");
    if (x < s.knots_x.front() || x > s.knots_x.back())
        throw std::invalid_argument("evaluation point " + std::to_string(x) +
                                    " outside knot range [" + std::to_string(s.knots_x.front()) +
                                    ", " + std::to_string(s.knots_x.back()) + "]");
    auto it = std::upper_bound(s.knots_x.begin(), s.knots_x.end(), x);
    std::size_t i = static_cast<std::size_t>(it - s.knots_x.begin());
    i = (i == 0) ? 0 : i - 1;
    if (i >= s.pieces.size()) i = s.pieces.size() - 1;
    const double u = x - s.knots_x[i];
    const CubicSpline::Piece& p = s.pieces[i];
    return ((p.a * u + p.b) * u + p.c) * u + p.d;
}

struct InterpolationResult {
    TimeSeries series;
    std::vector<std::size_t> filled_indices;
};

/// Fill every missing slot of a gridded series by cubic-spline evaluation at
/// the slot's day offset. Present slots pass through untouched.
inline InterpolationResult interpolate_missing(const TimeSeries& input,
                                               BoundaryCondition boundary) {
    std::vector<double> xs, ys;
    xs.reserve(input.size());
    ys.reserve(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input.values[i]) {
            xs.push_back(static_cast<double>(i));
            ys.push_back(*input.values[i]);
        }
    }
    if (xs.size() < 2) throw DataError("interpolation needs at least 2 present values");
    if (!input.values.front() || !input.values.back())
        throw DataError("first and last grid slots must be present");

    InterpolationResult out;
    out.series = input;
    if (xs.size() == input.size()) return out;  // nothing to fill

    const CubicSpline s = fit_cubic_spline(xs, ys, boundary);
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (!input.values[i]) {
            out.series.values[i] = evaluate(s, static_cast<double>(i));
            out.filled_indices.push_back(i);
        }
    }
    return out;
}

}  // namespace tsa
