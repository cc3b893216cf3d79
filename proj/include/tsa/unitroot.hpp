#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tsa/errors.hpp"
#include "tsa/stats.hpp"

namespace tsa {

/// Critical values of the constant-only (no trend) Dickey-Fuller t
/// distribution at the 1/5/10 percent levels.
struct AdfCriticalValues {
    double pct1 = 0.0;
    double pct5 = 0.0;
    double pct10 = 0.0;
};

enum class LagSelection { fixed, aic };

struct AdfResult {
    double statistic = 0.0;       // t ratio on the lagged level
    std::size_t lags_used = 0;    // augmentation lags in the final regression
    std::size_t n_effective = 0;  // rows in the final regression
    AdfCriticalValues critical_values;
    std::string p_bracket;  // "p < 0.01", "p < 0.05", "p < 0.10", "p > 0.10"
    bool reject_unit_root_at_5pct = false;
};

namespace detail {

// Finite-sample critical values for the constant-only ADF regression
// (Fuller's tau_mu table; the last row is the asymptotic distribution).
// Interpolation between rows is linear in 1/n.
struct AdfTableRow {
    double inv_n;  // 1/n, 0 for the asymptotic row
    double cv1, cv5, cv10;
};

inline const std::array<AdfTableRow, 6>& adf_table() {
    static const std::array<AdfTableRow, 6> rows = {{
        {1.0 / 25.0, -3.724, -2.986, -2.633},
        {1.0 / 50.0, -3.568, -2.921, -2.599},
        {1.0 / 100.0, -3.498, -2.891, -2.582},
        {1.0 / 250.0, -3.457, -2.873, -2.573},
        {1.0 / 500.0, -3.443, -2.867, -2.570},
        {0.0, -3.430, -2.862, -2.567},
    }};
    return rows;
}

}  // namespace detail

/// Critical values for a regression with n_effective usable rows. Sizes
/// between table entries interpolate linearly in 1/n; sizes in [20, 25)
/// clamp to the smallest tabulated row.
inline AdfCriticalValues adf_critical_values(std::size_t n_effective) {
    if (n_effective < 20)
        throw std::invalid_argument("ADF critical values need n_effective >= 20");
    const auto& table = detail::adf_table();
    const double inv = 1.0 / static_cast<double>(n_effective);
    if (inv >= table.front().inv_n) {
        const auto& r = table.front();
        return {r.cv1, r.cv5, r.cv10};
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (inv >= table[i].inv_n) {
            const auto& lo = table[i - 1];  // smaller n
            const auto& hi = table[i];      // larger n
            const double w = (inv - hi.inv_n) / (lo.inv_n - hi.inv_n);
            return {hi.cv1 + w * (lo.cv1 - hi.cv1), hi.cv5 + w * (lo.cv5 - hi.cv5),
                    hi.cv10 + w * (lo.cv10 - hi.cv10)};
        }
    }
    const auto& r = table.back();
    return {r.cv1, r.cv5, r.cv10};
}

/// Schwert's rule of thumb for the largest augmentation lag to consider.
inline std::size_t adf_default_max_lag(std::size_t n) {
    return static_cast<std::size_t>(
        std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

namespace detail {

struct AdfRegression {
    double statistic;
    std::size_t n_rows;
    double aic;  // n ln(RSS/n) + 2k, enough for comparison
};

/// Regression of dx_t on [const, x_{t-1}, dx_{t-1}..dx_{t-lags}] using rows
/// t = start_t .. n-1 of the original series (start_t >= lags + 1).
inline AdfRegression adf_regression(const std::vector<double>& x, std::size_t lags,
                                    std::size_t start_t) {
    const std::size_t n = x.size();
    const std::size_t rows = n - start_t;
    const std::size_t cols = 2 + lags;
    Matrix design(rows, cols);
    std::vector<double> response(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = start_t + r;
        response[r] = x[t] - x[t - 1];
        design(r, 0) = 1.0;
        design(r, 1) = x[t - 1];
        for (std::size_t j = 1; j <= lags; ++j)
            design(r, 1 + j) = x[t - j] - x[t - j - 1];
    }
    const OlsResult fit = ols(design, response);
    AdfRegression out;
    out.statistic = fit.coef[1] / fit.std_err[1];
    out.n_rows = rows;
    out.aic = static_cast<double>(rows) * std::log(fit.rss / static_cast<double>(rows)) +
              2.0 * static_cast<double>(cols);
    return out;
}

}  // namespace detail

/// Augmented Dickey-Fuller test with constant, no trend. With
/// LagSelection::aic the augmentation order k is chosen in 0..max_lag by
/// comparing regression AIC on a common sample, then the chosen k is refit
/// on its full usable sample. max_lag < 0 selects the Schwert default.
inline AdfResult adf_test(const std::vector<double>& values, int max_lag = -1,
                          LagSelection lag_selection = LagSelection::aic) {
    const std::size_t n = values.size();
    std::size_t klimit = (max_lag < 0) ? adf_default_max_lag(n)
                                       : static_cast<std::size_t>(max_lag);
    if (n < klimit + 10) throw std::invalid_argument("series too short for ADF with max_lag");
    if (variance(values) <= 0.0) throw DataError("constant series: ADF test undefined");

    std::size_t chosen = klimit;
    if (lag_selection == LagSelection::aic && klimit > 0) {
        double best_aic = 0.0;
        // common sample so the candidate AICs are comparable
        const std::size_t start_common = klimit + 1;
        for (std::size_t k = 0; k <= klimit; ++k) {
            const auto reg = detail::adf_regression(values, k, start_common);
            if (k == 0 || reg.aic < best_aic) {
                best_aic = reg.aic;
                chosen = k;
            }
        }
    }

    const auto final_reg = detail::adf_regression(values, chosen, chosen + 1);
    AdfResult res;
    res.statistic = final_reg.statistic;
    res.lags_used = chosen;
    res.n_effective = final_reg.n_rows;
    res.critical_values = adf_critical_values(res.n_effective);
    if (res.statistic < res.critical_values.pct1)
        res.p_bracket = "p < 0.01";
    else if (res.statistic < res.critical_values.pct5)
        res.p_bracket = "p < 0.05";
    else if (res.statistic < res.critical_values.pct10)
        res.p_bracket = "p < 0.10";
    else
        res.p_bracket = "p > 0.10";
    res.reject_unit_root_at_5pct = res.statistic < res.critical_values.pct5;
    return res;
}

}  // namespace tsa
