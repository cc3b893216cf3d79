#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tsa/errors.hpp"
#include "tsa/linalg.hpp"

namespace tsa {

namespace detail {

/// Regularized lower incomplete gamma P(a,x) by its power series (x < a+1).
inline double gamma_p_series(double a, double x) {
    const double lg = std::lgamma(a);
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - lg);
    }
    throw NumericError("incomplete gamma series failed to converge");
}

/// Regularized upper incomplete gamma Q(a,x) by modified Lentz continued
/// fraction (x >= a+1).
inline double gamma_q_cf(double a, double x) {
    const double lg = std::lgamma(a);
    const double fpmin = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return std::exp(-x + a * std::log(x) - lg) * h;
    }
    throw NumericError("incomplete gamma continued fraction failed to converge");
}

inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q requires x >= 0, a > 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

}  // namespace detail

/// Upper-tail probability of the chi-squared distribution with k degrees of
/// freedom: P(X > x) = Q(k/2, x/2).
inline double chi2_sf(double x, unsigned k) {
    if (k == 0) throw std::invalid_argument("chi2_sf requires k >= 1");
    if (x < 0.0) throw std::invalid_argument("chi2_sf requires x >= 0");
    return detail::gamma_q(0.5 * static_cast<double>(k), 0.5 * x);
}

/// Upper-tail standard normal probability.
inline double normal_sf(double z) {
    return 0.5 * std::erfc(z / 1.4142135623730951);
}

/// Two-sided normal p-value for a z statistic.
inline double two_sided_p(double z) {
    return 2.0 * normal_sf(std::abs(z));
}

inline double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

/// Biased (divide-by-n) sample variance.
inline double variance(const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

struct OlsResult {
    std::vector<double> coef;
    std::vector<double> std_err;
    std::vector<double> residuals;
    double rss = 0.0;
    double sigma2 = 0.0;  // rss / (n - k)
};

/// Ordinary least squares via Householder QR. Classical standard errors from
/// s^2 (X^T X)^{-1} with s^2 = RSS / (n - k). Rank deficiency raises
/// NumericError (relative pivot tolerance 1e-12).
inline OlsResult ols(const Matrix& design, const std::vector<double>& response) {
    const std::size_t m = design.rows(), n = design.cols();
    if (response.size() != m) throw std::invalid_argument("response length mismatch");
    if (m < n) throw std::invalid_argument("ols requires rows >= columns");

    Matrix qr = design;
    std::vector<double> qty = response;
    detail::householder_qr_apply(qr, qty);

    OlsResult res;
    res.coef.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = qty[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= qr(i, j) * res.coef[j];
        res.coef[i] = s / qr(i, i);
    }

    res.residuals.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < n; ++j) fit += design(i, j) * res.coef[j];
        res.residuals[i] = response[i] - fit;
        res.rss += res.residuals[i] * res.residuals[i];
    }
    res.sigma2 = (m > n) ? res.rss / static_cast<double>(m - n) : 0.0;

    // (X^T X)^{-1} = R^{-1} R^{-T}; diag entries from rows of R^{-1}
    Matrix rinv(n, n, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        rinv(col, col) = 1.0 / qr(col, col);
        for (std::size_t i = col; i-- > 0;) {
            double s = 0.0;
            for (std::size_t j = i + 1; j <= col; ++j) s += qr(i, j) * rinv(j, col);
            rinv(i, col) = -s / qr(i, i);
        }
    }
    res.std_err.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (std::size_t j = i; j < n; ++j) d += rinv(i, j) * rinv(i, j);
        res.std_err[i] = std::sqrt(res.sigma2 * d);
    }
    return res;
}

/// Sample autocorrelations for lags 1..max_lag with the white-noise
/// confidence band half-width.
struct Correlogram {
    std::vector<double> coefficients;  // index k-1 holds lag k
    std::size_t n = 0;
    double band = 0.0;  // 1.96 / sqrt(n)

    double at_lag(std::size_t k) const { return coefficients.at(k - 1); }
};

/// Biased-denominator ACF: rho_k = sum (x_t - xbar)(x_{t+k} - xbar) / sum (x_t - xbar)^2.
inline Correlogram acf(const std::vector<double>& values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (max_lag == 0) throw std::invalid_argument("max_lag must be positive");
    if (n <= max_lag) throw std::invalid_argument("series length must exceed max_lag");
    const double m = mean(values);
    double denom = 0.0;
    for (double v : values) denom += (v - m) * (v - m);
    if (denom <= 0.0) throw DataError("constant series has no autocorrelation");

    Correlogram cg;
    cg.n = n;
    cg.band = 1.96 / std::sqrt(static_cast<double>(n));
    cg.coefficients.resize(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) num += (values[t] - m) * (values[t + k] - m);
        cg.coefficients[k - 1] = num / denom;
    }
    return cg;
}

namespace detail {

/// Durbin-Levinson recursion on autocorrelations rho[0..max_lag] with
/// rho[0] = 1. Returns the partial autocorrelations phi_kk for k = 1..max_lag;
/// when ar_coeffs is non-null it receives the order-max_lag AR coefficients.
inline std::vector<double> durbin_levinson(const std::vector<double>& rho, std::size_t max_lag,
                                           std::vector<double>* ar_coeffs = nullptr) {
    std::vector<double> pacf_vals(max_lag, 0.0);
    std::vector<double> phi_prev(max_lag + 1, 0.0), phi_cur(max_lag + 1, 0.0);
    phi_prev[1] = rho[1];
    pacf_vals[0] = rho[1];
    for (std::size_t k = 2; k <= max_lag; ++k) {
        double num = rho[k];
        double den = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            num -= phi_prev[j] * rho[k - j];
            den -= phi_prev[j] * rho[j];
        }
        if (std::abs(den) < 1e-300)
            throw NumericError("Durbin-Levinson breakdown at lag " + std::to_string(k));
        const double phikk = num / den;
        for (std::size_t j = 1; j < k; ++j) phi_cur[j] = phi_prev[j] - phikk * phi_prev[k - j];
        phi_cur[k] = phikk;
        pacf_vals[k - 1] = phikk;
        phi_prev = phi_cur;
    }
    if (ar_coeffs) ar_coeffs->assign(phi_prev.begin() + 1, phi_prev.begin() + 1 + max_lag);
    return pacf_vals;
}

}  // namespace detail

/// Partial autocorrelations phi_kk via Durbin-Levinson on the sample ACF.
inline Correlogram pacf(const std::vector<double>& values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (max_lag == 0) throw std::invalid_argument("max_lag must be positive");
    if (2 * max_lag >= n) throw std::invalid_argument("pacf requires max_lag < n/2");
    const Correlogram sample = acf(values, max_lag);
    std::vector<double> rho(max_lag + 1, 1.0);
    for (std::size_t k = 1; k <= max_lag; ++k) rho[k] = sample.coefficients[k - 1];

    Correlogram cg;
    cg.n = n;
    cg.band = sample.band;
    cg.coefficients = detail::durbin_levinson(rho, max_lag);
    return cg;
}

struct LjungBoxRow {
    std::size_t lag = 0;
    double q_stat = 0.0;
    std::size_t df = 0;
    double p_value = 1.0;
};

/// Ljung-Box rows computed from given sample autocorrelations (lag k at
/// index k-1) for a series of length n:
///   Q(h) = n (n+2) sum_{k<=h} rho_k^2 / (n - k),  p = chi2_sf(Q, df).
/// df = h by default; with df_adjust it is max(h - fitted_params, 1), the
/// textbook correction for diagnostics on model residuals.
inline std::vector<LjungBoxRow> ljung_box_from_acf(const std::vector<double>& rho, std::size_t n,
                                                   std::size_t max_lag,
                                                   std::size_t fitted_params = 0,
                                                   bool df_adjust = false) {
    if (max_lag == 0 || max_lag > rho.size())
        throw std::invalid_argument("max_lag must lie in 1..len(rho)");
    if (n <= max_lag) throw std::invalid_argument("series length must exceed max_lag");
    std::vector<LjungBoxRow> rows;
    rows.reserve(max_lag);
    double accum = 0.0;
    const double nn = static_cast<double>(n);
    for (std::size_t h = 1; h <= max_lag; ++h) {
        accum += rho[h - 1] * rho[h - 1] / (nn - static_cast<double>(h));
        LjungBoxRow row;
        row.lag = h;
        row.q_stat = nn * (nn + 2.0) * accum;
        row.df = df_adjust ? std::max<std::size_t>(h > fitted_params ? h - fitted_params : 0, 1)
                           : h;
        row.p_value = chi2_sf(row.q_stat, static_cast<unsigned>(row.df));
        rows.push_back(row);
    }
    return rows;
}

/// Ljung-Box portmanteau test on a residual series.
inline std::vector<LjungBoxRow> ljung_box(const std::vector<double>& residuals,
                                          std::size_t max_lag, std::size_t fitted_params = 0,
                                          bool df_adjust = false) {
    const std::size_t n = residuals.size();
    if (n <= max_lag) throw std::invalid_argument("series length must exceed max_lag");
    const Correlogram cg = acf(residuals, max_lag);
    return ljung_box_from_acf(cg.coefficients, n, max_lag, fitted_params, df_adjust);
}

}  // namespace tsa
