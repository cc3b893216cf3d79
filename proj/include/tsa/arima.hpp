#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tsa/errors.hpp"
#include "tsa/linalg.hpp"
#include "tsa/series.hpp"
#include "tsa/simulate.hpp"
#include "tsa/stats.hpp"

namespace tsa {

/// Model order (p,d,q) plus the constant-term switch. The toolkit bound on
/// each order is 10.
struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;
    bool include_constant = false;

    /// Constant on for level models, off once differencing removes the mean.
    static ArimaOrder with_default_constant(int p, int d, int q) {
        return ArimaOrder{p, d, q, d == 0};
    }

    int n_mean_params() const { return p + q + (include_constant ? 1 : 0); }

    void validate() const {
        if (p < 0 || d < 0 || q < 0 || p > 10 || d > 10 || q > 10)
            throw std::invalid_argument("ARIMA orders must lie in 0..10");
    }

    std::string label() const {
        return "ARIMA(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) +
               ")";
    }
};

/// Coefficients of the ARMA recursion
///   x_t = c + phi_1 x_{t-1} + ... + eps_t + theta_1 eps_{t-1} + ...
/// MA terms enter with plus signs, so the MA characteristic polynomial is
/// 1 + theta_1 z + ... + theta_q z^q.
struct ArimaParams {
    std::vector<double> phi;
    std::vector<double> theta;
    double constant = 0.0;
    double sigma2 = 0.0;
};

struct RootReport {
    std::vector<std::complex<double>> roots;
    double min_modulus = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Durand-Kerner root finder for p(z) = 1 - c_1 z - ... - c_k z^k with
/// nonzero leading coefficient. Returns false when the iteration fails to
/// settle.
inline bool durand_kerner(const std::vector<double>& coeffs,
                          std::vector<std::complex<double>>& roots) {
    const std::size_t k = coeffs.size();
    // monic form: z^k + b_{k-1} z^{k-1} + ... + b_0
    const double lead = -coeffs[k - 1];
    std::vector<std::complex<double>> b(k);
    b[0] = std::complex<double>(1.0 / lead, 0.0);
    for (std::size_t i = 1; i < k; ++i) b[i] = -coeffs[i - 1] / lead;

    auto eval_monic = [&](std::complex<double> z) {
        std::complex<double> v(1.0, 0.0);
        for (std::size_t i = k; i-- > 0;) v = v * z + b[i];
        return v;
    };

    roots.resize(k);
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        acc *= seed;
        roots[j] = acc;
    }
    for (int iter = 0; iter < 400; ++iter) {
        double max_delta = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t l = 0; l < k; ++l)
                if (l != j) denom *= roots[j] - roots[l];
            if (std::abs(denom) < 1e-300) return false;
            const std::complex<double> delta = eval_monic(roots[j]) / denom;
            roots[j] -= delta;
            max_delta = std::max(max_delta, std::abs(delta));
        }
        if (max_delta < 1e-14) return true;
    }
    return false;
}

/// Degree after dropping negligible trailing coefficients.
inline std::size_t effective_degree(const std::vector<double>& coeffs, double tol = 1e-10) {
    std::size_t k = coeffs.size();
    while (k > 0 && std::abs(coeffs[k - 1]) <= tol) --k;
    return k;
}

/// Smallest root modulus of 1 - sum c_i z^i, +inf for the empty polynomial,
/// 0 when the root finder fails (treated as maximally constraint-violating).
inline double min_root_modulus(const std::vector<double>& coeffs) {
    const std::size_t k = effective_degree(coeffs);
    if (k == 0) return std::numeric_limits<double>::infinity();
    std::vector<double> trimmed(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<std::complex<double>> roots;
    if (!durand_kerner(trimmed, roots)) return 0.0;
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : roots) m = std::min(m, std::abs(r));
    return m;
}

/// MA coefficients negated so the plus-sign convention maps onto the
/// 1 - sum c_i z^i root finder.
inline std::vector<double> ma_char_coeffs(const std::vector<double>& theta) {
    std::vector<double> c(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) c[i] = -theta[i];
    return c;
}

}  // namespace detail

/// All complex roots of 1 - c_1 z - ... - c_k z^k together with the smallest
/// modulus. Roots are verified by back-substitution to |p(root)| <= 1e-8.
inline RootReport characteristic_roots(const std::vector<double>& coeffs) {
    const std::size_t k = detail::effective_degree(coeffs, 0.0);
    if (k == 0) throw std::invalid_argument("characteristic polynomial has degree 0");
    std::vector<double> trimmed(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(k));
    RootReport rep;
    if (!detail::durand_kerner(trimmed, rep.roots))
        throw NumericError("root finder did not converge");
    for (const auto& r : rep.roots) {
        std::complex<double> v(1.0, 0.0), zp(1.0, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            zp *= r;
            v -= trimmed[i] * zp;
        }
        if (std::abs(v) > 1e-8) throw NumericError("characteristic root failed residual check");
        rep.min_modulus = std::min(rep.min_modulus, std::abs(r));
    }
    return rep;
}

struct CssResult {
    double rss = 0.0;
    double loglik = 0.0;
    std::vector<double> residuals;  // same length as the differenced series
};

/// Conditional-sum-of-squares evaluation of the ARMA recursion: innovations
/// for t = p+1..n with presample values set to zero, Gaussian log-likelihood
/// with the innovation variance profiled out as RSS/(n-p).
inline CssResult css_objective(const ArimaParams& params, const std::vector<double>& diff_values,
                               const ArimaOrder& order) {
    const std::size_t n = diff_values.size();
    const std::size_t p = static_cast<std::size_t>(order.p);
    const std::size_t q = static_cast<std::size_t>(order.q);
    if (n <= p + q) throw std::invalid_argument("series too short for CSS recursion");
    const double c = order.include_constant ? params.constant : 0.0;

    CssResult out;
    out.residuals.assign(n, 0.0);
    for (std::size_t t = p; t < n; ++t) {
        double eps = diff_values[t] - c;
        for (std::size_t i = 1; i <= p; ++i) eps -= params.phi[i - 1] * diff_values[t - i];
        for (std::size_t j = 1; j <= q && j <= t; ++j)
            eps -= params.theta[j - 1] * out.residuals[t - j];
        out.residuals[t] = eps;
        out.rss += eps * eps;
    }
    const double n_eff = static_cast<double>(n - p);
    const double sigma2 = out.rss / n_eff;
    out.loglik = -0.5 * n_eff * (std::log(2.0 * 3.141592653589793 * sigma2) + 1.0);
    return out;
}

struct Criteria {
    double aic = 0.0, bic = 0.0, hqic = 0.0;
};

/// AIC = -2l + 2k, BIC = -2l + k ln n, HQIC = -2l + 2k ln ln n. k counts
/// AR + MA + constant + variance parameters.
inline Criteria information_criteria(double loglik, std::size_t k_params, std::size_t n) {
    if (n <= k_params) throw std::invalid_argument("criteria need n > k_params");
    const double k = static_cast<double>(k_params);
    const double ln_n = std::log(static_cast<double>(n));
    return {-2.0 * loglik + 2.0 * k, -2.0 * loglik + k * ln_n,
            -2.0 * loglik + 2.0 * k * std::log(ln_n)};
}

struct CoefRow {
    std::string name;
    double coef = 0.0;
    double std_err = std::numeric_limits<double>::quiet_NaN();
    double z = std::numeric_limits<double>::quiet_NaN();
    double p = std::numeric_limits<double>::quiet_NaN();
    double ci_low = std::numeric_limits<double>::quiet_NaN();
    double ci_high = std::numeric_limits<double>::quiet_NaN();
};

/// z ratio, two-sided p, and 95% interval for one estimate.
inline CoefRow coef_inference(std::string name, double coef, double std_err) {
    CoefRow row;
    row.name = std::move(name);
    row.coef = coef;
    row.std_err = std_err;
    row.z = coef / std_err;
    row.p = two_sided_p(row.z);
    row.ci_low = coef - 1.96 * std_err;
    row.ci_high = coef + 1.96 * std_err;
    return row;
}

struct FittedArima {
    ArimaOrder order;
    ArimaParams params;
    double loglik = 0.0;
    double aic = 0.0, bic = 0.0, hqic = 0.0;
    std::vector<CoefRow> coef_table;
    bool se_available = false;
    std::vector<double> residuals;
    std::size_t presample = 0;  // leading residuals conditioned on zero presample values
    std::size_t n_obs = 0;      // length of the differenced series
    bool converged = false;

    /// Residuals with the presample-conditioned prefix dropped; what the
    /// whiteness diagnostics should look at.
    std::vector<double> clean_residuals() const {
        return {residuals.begin() + static_cast<std::ptrdiff_t>(presample), residuals.end()};
    }
};

struct ForecastResult {
    std::size_t horizon = 0;
    std::vector<double> point;
    std::vector<double> std_err;
    std::vector<double> ci_low;
    std::vector<double> ci_high;
};

namespace detail {

constexpr double kRootBarrier = 1.001;
constexpr double kPenaltyWeight = 1e6;

/// Stationarity/invertibility penalty: zero when every characteristic root
/// stays outside the barrier, quadratic in the shortfall otherwise.
inline double root_penalty(const ArimaParams& params) {
    double worst = 0.0;
    if (!params.phi.empty()) {
        const double m = min_root_modulus(params.phi);
        if (m < kRootBarrier) worst = std::max(worst, kRootBarrier - m);
    }
    if (!params.theta.empty()) {
        const double m = min_root_modulus(ma_char_coeffs(params.theta));
        if (m < kRootBarrier) worst = std::max(worst, kRootBarrier - m);
    }
    return worst > 0.0 ? kPenaltyWeight * worst * worst : 0.0;
}

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    bool tol_met = false;
    std::size_t evals = 0;
};

template <typename F>
NelderMeadResult nelder_mead(F&& f, const std::vector<double>& start, std::size_t max_evals,
                             double rel_tol) {
    const std::size_t dim = start.size();
    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    std::vector<std::vector<double>> simplex(dim + 1, start);
    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i < dim; ++i)
        simplex[i + 1][i] += 0.1 * std::max(0.1, std::abs(start[i]));
    for (std::size_t i = 0; i <= dim; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> idx(dim + 1);
    bool tol_met = false;
    while (evals < max_evals) {
        for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (fv[a] != fv[b]) return fv[a] < fv[b];
            return a < b;  // deterministic tie order
        });
        const std::size_t best = idx[0], worst = idx[dim], second = idx[dim - 1];
        if (fv[worst] - fv[best] <= rel_tol * (std::abs(fv[best]) + 1e-12)) {
            tol_met = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double t) {
            std::vector<double> x(dim);
            for (std::size_t j = 0; j < dim; ++j)
                x[j] = centroid[j] + t * (centroid[j] - simplex[worst][j]);
            return x;
        };

        const auto reflected = blend(1.0);
        const double fr = eval(reflected);
        if (fr < fv[best]) {
            const auto expanded = blend(2.0);
            const double fe = eval(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                fv[worst] = fe;
            } else {
                simplex[worst] = reflected;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = reflected;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const auto contracted = blend(outside ? 0.5 : -0.5);
            const double fc = eval(contracted);
            if (fc < (outside ? fr : fv[worst])) {
                simplex[worst] = contracted;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < dim; ++j)
                        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i)
        if (fv[i] < fv[best]) best = i;
    return {simplex[best], fv[best], tol_met, evals};
}

inline std::vector<double> pack_params(const ArimaParams& params, const ArimaOrder& order) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(order.n_mean_params()));
    if (order.include_constant) v.push_back(params.constant);
    v.insert(v.end(), params.phi.begin(), params.phi.end());
    v.insert(v.end(), params.theta.begin(), params.theta.end());
    return v;
}

inline ArimaParams unpack_params(const std::vector<double>& v, const ArimaOrder& order) {
    ArimaParams params;
    std::size_t at = 0;
    if (order.include_constant) params.constant = v[at++];
    params.phi.assign(v.begin() + static_cast<std::ptrdiff_t>(at),
                      v.begin() + static_cast<std::ptrdiff_t>(at + order.p));
    at += static_cast<std::size_t>(order.p);
    params.theta.assign(v.begin() + static_cast<std::ptrdiff_t>(at),
                        v.begin() + static_cast<std::ptrdiff_t>(at + order.q));
    return params;
}

/// Shrink coefficients toward zero until the characteristic roots clear the
/// barrier; used to keep optimizer starting points feasible.
inline void shrink_to_feasible(std::vector<double>& coeffs, bool is_ma) {
    for (int round = 0; round < 200; ++round) {
        const double m = is_ma ? min_root_modulus(ma_char_coeffs(coeffs))
                               : min_root_modulus(coeffs);
        if (m >= 1.02) return;
        for (double& c : coeffs) c *= 0.9;
    }
    std::fill(coeffs.begin(), coeffs.end(), 0.0);
}

/// Yule-Walker AR start plus Hannan-Rissanen MA start (long-AR residual
/// proxy); zeros when either is infeasible.
inline ArimaParams initial_params(const std::vector<double>& w, const ArimaOrder& order) {
    const std::size_t n = w.size();
    const std::size_t p = static_cast<std::size_t>(order.p);
    const std::size_t q = static_cast<std::size_t>(order.q);
    ArimaParams start;
    start.phi.assign(p, 0.0);
    start.theta.assign(q, 0.0);

    const double mu = mean(w);
    if (p > 0) {
        try {
            const Correlogram sample = acf(w, p);
            std::vector<double> rho(p + 1, 1.0);
            for (std::size_t k = 1; k <= p; ++k) rho[k] = sample.coefficients[k - 1];
            std::vector<double> ar;
            durbin_levinson(rho, p, &ar);
            start.phi = ar;
        } catch (const std::exception&) {
            // keep zeros
        }
    }
    if (q > 0) {
        const std::size_t long_order =
            std::min<std::size_t>(std::min<std::size_t>(n / 10, 20), n > 4 ? n / 4 : 0);
        if (long_order >= 1 && n > long_order + q + p + 2) {
            try {
                const Correlogram sample = acf(w, long_order);
                std::vector<double> rho(long_order + 1, 1.0);
                for (std::size_t k = 1; k <= long_order; ++k) rho[k] = sample.coefficients[k - 1];
                std::vector<double> long_ar;
                durbin_levinson(rho, long_order, &long_ar);
                std::vector<double> proxy(n, 0.0);
                for (std::size_t t = long_order; t < n; ++t) {
                    double e = w[t] - mu;
                    for (std::size_t i = 1; i <= long_order; ++i)
                        e -= long_ar[i - 1] * (w[t - i] - mu);
                    proxy[t] = e;
                }
                const std::size_t t0 = long_order + std::max(p, q);
                if (n > t0 + p + q + 2) {
                    const std::size_t rows = n - t0;
                    Matrix design(rows, p + q);
                    std::vector<double> resp(rows);
                    for (std::size_t r = 0; r < rows; ++r) {
                        const std::size_t t = t0 + r;
                        resp[r] = w[t] - mu;
                        for (std::size_t i = 1; i <= p; ++i) design(r, i - 1) = w[t - i] - mu;
                        for (std::size_t j = 1; j <= q; ++j)
                            design(r, p + j - 1) = proxy[t - j];
                    }
                    const OlsResult hr = ols(design, resp);
                    for (std::size_t j = 0; j < q; ++j) start.theta[j] = hr.coef[p + j];
                }
            } catch (const std::exception&) {
                // keep zeros
            }
        }
    }

    shrink_to_feasible(start.phi, false);
    shrink_to_feasible(start.theta, true);
    double phi_sum = 0.0;
    for (double v : start.phi) phi_sum += v;
    start.constant = order.include_constant ? mu * (1.0 - phi_sum) : 0.0;
    return start;
}

}  // namespace detail

/// Coefficient table (std err / z / p / 95% CI) from the inverse negative
/// Hessian of the CSS log-likelihood, with the innovation variance included
/// as a parameter. Hessian by central finite differences with step
/// 1e-4 * max(1, |param|). Throws NumericError when the Hessian is not
/// positive definite.
inline std::vector<CoefRow> standard_errors(const FittedArima& fitted,
                                            const std::vector<double>& diff_values) {
    const ArimaOrder& order = fitted.order;
    const std::size_t n_mean = static_cast<std::size_t>(order.n_mean_params());
    const std::size_t dim = n_mean + 1;  // + sigma2

    std::vector<double> v = detail::pack_params(fitted.params, order);
    v.push_back(fitted.params.sigma2);

    const std::size_t n = diff_values.size();
    const double n_eff = static_cast<double>(n - static_cast<std::size_t>(order.p));
    auto loglik_at = [&](const std::vector<double>& vec) {
        ArimaParams params = detail::unpack_params(vec, order);
        const double sigma2 = vec[dim - 1];
        if (sigma2 <= 0.0) return -std::numeric_limits<double>::infinity();
        const CssResult css = css_objective(params, diff_values, order);
        return -0.5 * n_eff * std::log(2.0 * 3.141592653589793 * sigma2) -
               css.rss / (2.0 * sigma2);
    };

    std::vector<double> h(dim);
    for (std::size_t i = 0; i < dim; ++i) h[i] = 1e-4 * std::max(1.0, std::abs(v[i]));

    Matrix hess(dim, dim);
    const double f0 = loglik_at(v);
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> vp = v, vm = v;
        vp[i] += h[i];
        vm[i] -= h[i];
        hess(i, i) = (loglik_at(vp) - 2.0 * f0 + loglik_at(vm)) / (h[i] * h[i]);
        for (std::size_t j = i + 1; j < dim; ++j) {
            std::vector<double> vpp = v, vpm = v, vmp = v, vmm = v;
            vpp[i] += h[i]; vpp[j] += h[j];
            vpm[i] += h[i]; vpm[j] -= h[j];
            vmp[i] -= h[i]; vmp[j] += h[j];
            vmm[i] -= h[i]; vmm[j] -= h[j];
            const double mixed = (loglik_at(vpp) - loglik_at(vpm) - loglik_at(vmp) +
                                  loglik_at(vmm)) / (4.0 * h[i] * h[j]);
            hess(i, j) = mixed;
            hess(j, i) = mixed;
        }
    }

    Matrix neg(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) neg(i, j) = -hess(i, j);
    const Matrix cov = invert_symmetric(neg);
    for (std::size_t i = 0; i < dim; ++i)
        if (!(cov(i, i) > 0.0)) throw NumericError("non-positive-definite Hessian");

    std::vector<std::string> names;
    if (order.include_constant) names.push_back("const");
    for (int i = 1; i <= order.p; ++i) names.push_back("ar.L" + std::to_string(i));
    for (int j = 1; j <= order.q; ++j) names.push_back("ma.L" + std::to_string(j));
    names.push_back("sigma2");

    std::vector<CoefRow> rows(dim);
    for (std::size_t i = 0; i < dim; ++i)
        rows[i] = coef_inference(names[i], v[i], std::sqrt(cov(i, i)));
    return rows;
}

/// Fit ARIMA(p,d,q) by conditional-sum-of-squares likelihood: difference d
/// times, then maximize the CSS log-likelihood over the mean parameters with
/// a derivative-free simplex search. Characteristic roots are kept outside
/// the unit circle by a quadratic barrier penalty; a fit whose optimum
/// touches the barrier is returned with converged = false rather than
/// discarded.
inline FittedArima fit(const std::vector<double>& series, const ArimaOrder& order) {
    order.validate();
    const std::size_t min_len = 20 + static_cast<std::size_t>(order.p + order.d + order.q);
    if (series.size() < min_len)
        throw std::invalid_argument("series of length " + std::to_string(series.size()) +
                                    " shorter than required " + std::to_string(min_len));
    const DifferencedSeries diff = difference(series, static_cast<std::size_t>(order.d));
    const std::vector<double>& w = diff.values;
    const std::size_t n = w.size();
    const std::size_t p = static_cast<std::size_t>(order.p);
    const std::size_t q = static_cast<std::size_t>(order.q);

    FittedArima out;
    out.order = order;
    out.n_obs = n;
    out.presample = std::max(p, q);

    if (p == 0 && q == 0) {
        out.params.phi.clear();
        out.params.theta.clear();
        out.params.constant = order.include_constant ? mean(w) : 0.0;
        const CssResult css = css_objective(out.params, w, order);
        out.params.sigma2 = css.rss / static_cast<double>(n);
        out.loglik = css.loglik;
        out.residuals = css.residuals;
        out.converged = true;
    } else {
        const ArimaParams start = detail::initial_params(w, order);
        auto objective = [&](const std::vector<double>& v) {
            const ArimaParams params = detail::unpack_params(v, order);
            const CssResult css = css_objective(params, w, order);
            return -css.loglik + detail::root_penalty(params);
        };

        const std::size_t budget =
            2000 * static_cast<std::size_t>(order.p + order.q + 1);
        const std::vector<double> x0 = detail::pack_params(start, order);

        // keep the best run that honors the root constraints; a run whose
        // optimum sits on the barrier is discarded rather than returned
        detail::NelderMeadResult best;
        bool have_best = false;
        NormalRng jitter_rng(0x7a51u);  // fixed: fits are deterministic
        for (int run = 0; run < 3; ++run) {
            std::vector<double> x = x0;
            if (run > 0)
                for (double& xi : x)
                    xi += 0.05 * (2.0 * jitter_rng.uniform() - 1.0) * std::max(0.2, std::abs(xi));
            const auto res = detail::nelder_mead(objective, x, budget, 1e-10);
            if (detail::root_penalty(detail::unpack_params(res.x, order)) > 0.0) continue;
            if (!have_best || res.fx < best.fx) {
                best = res;
                have_best = true;
            }
        }
        if (!have_best)
            throw NumericError(
                "invariant-violating optimum: every restart landed on the root boundary");

        out.params = detail::unpack_params(best.x, order);
        const CssResult css = css_objective(out.params, w, order);
        out.params.sigma2 = css.rss / static_cast<double>(n - p);
        out.loglik = css.loglik;
        out.residuals = css.residuals;
        out.converged = best.tol_met;
    }

    const std::size_t k = static_cast<std::size_t>(order.n_mean_params()) + 1;
    const Criteria crit = information_criteria(out.loglik, k, n);
    out.aic = crit.aic;
    out.bic = crit.bic;
    out.hqic = crit.hqic;

    try {
        out.coef_table = standard_errors(out, w);
        out.se_available = true;
    } catch (const NumericError&) {
        out.se_available = false;
        std::vector<double> v = detail::pack_params(out.params, order);
        v.push_back(out.params.sigma2);
        std::vector<std::string> names;
        if (order.include_constant) names.push_back("const");
        for (int i = 1; i <= order.p; ++i) names.push_back("ar.L" + std::to_string(i));
        for (int j = 1; j <= order.q; ++j) names.push_back("ma.L" + std::to_string(j));
        names.push_back("sigma2");
        out.coef_table.resize(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.coef_table[i].name = names[i];
            out.coef_table[i].coef = v[i];
        }
    }
    return out;
}

/// Psi weights (moving-average representation) of the d-times integrated
/// process, obtained from phi(z) (1-z)^d. Drives the forecast variance
/// recursion var(h) = sigma^2 sum_{j<h} psi_j^2.
inline std::vector<double> psi_weights(const ArimaParams& params, const ArimaOrder& order,
                                       std::size_t count) {
    const std::size_t p = static_cast<std::size_t>(order.p);
    const std::size_t d = static_cast<std::size_t>(order.d);
    const std::size_t q = static_cast<std::size_t>(order.q);
    // coefficients of phi(z) * (1-z)^d as 1 - sum phid_i z^i
    std::vector<double> poly(p + d + 1, 0.0);  // power-order coefficients
    poly[0] = 1.0;
    for (std::size_t i = 1; i <= p; ++i) poly[i] = -params.phi[i - 1];
    for (std::size_t round = 0; round < d; ++round) {
        std::vector<double> next(poly.size(), 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            if (i >= 1) next[i] -= poly[i - 1];
        }
        poly = std::move(next);
    }
    std::vector<double> phid(p + d);
    for (std::size_t i = 1; i <= p + d; ++i) phid[i - 1] = -poly[i];

    std::vector<double> psi(count, 0.0);
    if (count == 0) return psi;
    psi[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j) {
        double v = (j <= q) ? params.theta[j - 1] : 0.0;
        for (std::size_t i = 1; i <= phid.size() && i <= j; ++i) v += phid[i - 1] * psi[j - i];
        psi[j] = v;
    }
    return psi;
}

/// Minimum-MSE forecast: the ARMA recursion iterated forward on the
/// differenced scale with future innovations at zero, then integrated back
/// to level scale. 95% intervals from the psi-weight variance expansion.
inline ForecastResult forecast(const FittedArima& fitted, const std::vector<double>& origin_series,
                               std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("horizon must be positive");
    if (horizon > 10000) throw std::invalid_argument("horizon exceeds toolkit bound of 10000");
    const ArimaOrder& order = fitted.order;
    const std::size_t d = static_cast<std::size_t>(order.d);
    if (origin_series.size() < d + 1)
        throw std::invalid_argument("origin series shorter than differencing order");
    const DifferencedSeries diff = difference(origin_series, d);
    if (diff.values.size() != fitted.n_obs)
        throw std::invalid_argument("origin series does not match the fitted sample");

    const std::size_t p = static_cast<std::size_t>(order.p);
    const std::size_t q = static_cast<std::size_t>(order.q);
    const std::size_t n = diff.values.size();
    const double c = order.include_constant ? fitted.params.constant : 0.0;

    std::vector<double> x = diff.values;
    x.reserve(n + horizon);
    for (std::size_t h = 1; h <= horizon; ++h) {
        const std::size_t t = n + h - 1;
        double v = c;
        for (std::size_t i = 1; i <= p; ++i) v += fitted.params.phi[i - 1] * x[t - i];
        for (std::size_t j = 1; j <= q; ++j) {
            if (t >= j && t - j < n) v += fitted.params.theta[j - 1] * fitted.residuals[t - j];
        }
        x.push_back(v);
    }

    // last value of each differencing stage of the observed series
    std::vector<double> stage_last(d);
    {
        std::vector<double> cur = origin_series;
        for (std::size_t j = 0; j < d; ++j) {
            stage_last[j] = cur.back();
            const DifferencedSeries dd = difference(cur, 1);
            cur = dd.values;
        }
    }

    ForecastResult res;
    res.horizon = horizon;
    res.point.resize(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        double v = x[n + h];
        for (std::size_t j = d; j-- > 0;) {
            v = stage_last[j] + v;
            stage_last[j] = v;
        }
        res.point[h] = v;
    }

    const std::vector<double> psi = psi_weights(fitted.params, order, horizon);
    res.std_err.resize(horizon);
    res.ci_low.resize(horizon);
    res.ci_high.resize(horizon);
    double var = 0.0;
    for (std::size_t h = 0; h < horizon; ++h) {
        var += psi[h] * psi[h];
        res.std_err[h] = std::sqrt(fitted.params.sigma2 * var);
        res.ci_low[h] = res.point[h] - 1.96 * res.std_err[h];
        res.ci_high[h] = res.point[h] + 1.96 * res.std_err[h];
    }
    return res;
}

}  // namespace tsa
