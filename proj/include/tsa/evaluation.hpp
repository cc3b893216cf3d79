#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "tsa/arima.hpp"
#include "tsa/errors.hpp"

namespace tsa {

enum class Criterion { aic, bic, hqic };

inline std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::aic: return "aic";
        case Criterion::bic: return "bic";
        case Criterion::hqic: return "hqic";
    }
    return "?";
}

inline Criterion criterion_from_string(const std::string& s) {
    if (s == "aic") return Criterion::aic;
    if (s == "bic") return Criterion::bic;
    if (s == "hqic") return Criterion::hqic;
    throw std::invalid_argument("unknown criterion '" + s + "' (expected aic, bic, or hqic)");
}

struct GridCell {
    double aic = std::numeric_limits<double>::quiet_NaN();
    double bic = std::numeric_limits<double>::quiet_NaN();
    double hqic = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;

    double value(Criterion c) const {
        switch (c) {
            case Criterion::aic: return aic;
            case Criterion::bic: return bic;
            case Criterion::hqic: return hqic;
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
};

/// AIC/BIC/HQIC over the (p,q) rectangle at a fixed differencing order; the
/// plot-ready content of an information-criterion heatmap.
struct OrderGrid {
    int d = 0;
    int p_max = 0;
    int q_max = 0;
    std::vector<GridCell> cells;  // row-major, index p * (q_max+1) + q
    std::pair<int, int> best_by_aic{-1, -1};
    std::pair<int, int> best_by_bic{-1, -1};

    const GridCell& cell(int p, int q) const {
        return cells[static_cast<std::size_t>(p) * static_cast<std::size_t>(q_max + 1) +
                     static_cast<std::size_t>(q)];
    }

    /// Argmin over converged cells. Ties within 1e-9 break toward smaller
    /// p+q, then smaller p.
    std::pair<int, int> best(Criterion c) const {
        std::pair<int, int> arg{-1, -1};
        double best_val = std::numeric_limits<double>::infinity();
        for (int p = 0; p <= p_max; ++p) {
            for (int q = 0; q <= q_max; ++q) {
                const GridCell& cl = cell(p, q);
                if (!cl.converged || !std::isfinite(cl.value(c))) continue;
                const double v = cl.value(c);
                if (arg.first < 0 || v < best_val - 1e-9) {
                    best_val = v;
                    arg = {p, q};
                } else if (v <= best_val + 1e-9) {
                    const int cur = arg.first + arg.second;
                    if (p + q < cur || (p + q == cur && p < arg.first)) {
                        best_val = std::min(best_val, v);
                        arg = {p, q};
                    }
                }
            }
        }
        return arg;
    }

    /// Converged cells ordered by criterion (near-ties toward parsimony),
    /// for walking the candidate list of an acceptance gate. Selection sort
    /// keeps the ordering consistent with best() under the fuzzy tie rule.
    std::vector<std::pair<int, int>> ranked(Criterion c) const {
        std::vector<std::pair<int, int>> pool;
        for (int p = 0; p <= p_max; ++p)
            for (int q = 0; q <= q_max; ++q)
                if (cell(p, q).converged && std::isfinite(cell(p, q).value(c)))
                    pool.emplace_back(p, q);
        std::vector<std::pair<int, int>> out;
        out.reserve(pool.size());
        while (!pool.empty()) {
            std::size_t pick = 0;
            for (std::size_t i = 1; i < pool.size(); ++i) {
                const double vi = cell(pool[i].first, pool[i].second).value(c);
                const double vp = cell(pool[pick].first, pool[pick].second).value(c);
                if (vi < vp - 1e-9) {
                    pick = i;
                } else if (vi <= vp + 1e-9) {
                    const int si = pool[i].first + pool[i].second;
                    const int sp = pool[pick].first + pool[pick].second;
                    if (si < sp || (si == sp && pool[i].first < pool[pick].first)) pick = i;
                }
            }
            out.push_back(pool[pick]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        return out;
    }
};

/// Fit every ARIMA(p,d,q) on [0..p_max] x [0..q_max] and record the
/// information criteria. The constant follows the d-based default. Cells are
/// independent, so n_threads > 1 fans them out over a worker pool; results
/// are written into per-cell slots, keeping the grid deterministic either
/// way.
inline OrderGrid grid_search(const std::vector<double>& series, int d, int p_max, int q_max,
                             unsigned n_threads = 1) {
    if (p_max < 0 || q_max < 0 || p_max > 10 || q_max > 10)
        throw std::invalid_argument("grid bounds must lie in 0..10");
    OrderGrid grid;
    grid.d = d;
    grid.p_max = p_max;
    grid.q_max = q_max;
    const std::size_t n_cells =
        static_cast<std::size_t>(p_max + 1) * static_cast<std::size_t>(q_max + 1);
    grid.cells.assign(n_cells, GridCell{});

    const bool constant_on = ArimaOrder::with_default_constant(0, d, 0).include_constant;

    auto run_cell = [&](std::size_t idx) {
        const int p = static_cast<int>(idx) / (q_max + 1);
        const int q = static_cast<int>(idx) % (q_max + 1);
        if (p == 0 && q == 0 && d == 0 && !constant_on) return;  // nothing to fit
        try {
            const FittedArima f = fit(series, ArimaOrder::with_default_constant(p, d, q));
            GridCell& cl = grid.cells[idx];
            cl.aic = f.aic;
            cl.bic = f.bic;
            cl.hqic = f.hqic;
            cl.converged = f.converged;
        } catch (const std::exception&) {
            // cell stays unconverged
        }
    };

    if (n_threads <= 1) {
        for (std::size_t idx = 0; idx < n_cells; ++idx) run_cell(idx);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= n_cells) return;
                run_cell(idx);
            }
        };
        std::vector<std::thread> pool;
        const unsigned count = std::min<unsigned>(n_threads, static_cast<unsigned>(n_cells));
        pool.reserve(count);
        for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    bool any = false;
    for (const auto& cl : grid.cells) any = any || cl.converged;
    if (!any) throw NumericError("grid search: no cell converged");
    grid.best_by_aic = grid.best(Criterion::aic);
    grid.best_by_bic = grid.best(Criterion::bic);
    return grid;
}

/// Mean squared error between two equal-length vectors.
inline double mse(const std::vector<double>& predicted, const std::vector<double>& observed) {
    if (predicted.size() != observed.size())
        throw std::invalid_argument("mse requires equal-length inputs");
    if (predicted.empty()) throw std::invalid_argument("mse of empty vectors is undefined");
    double s = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double e = predicted[i] - observed[i];
        s += e * e;
    }
    return s / static_cast<double>(predicted.size());
}

struct BacktestRow {
    std::size_t test_length = 0;
    double mse = std::numeric_limits<double>::quiet_NaN();
    std::size_t n_windows = 0;  // folds that produced predictions
    std::size_t n_skipped = 0;  // folds whose fit failed
};

struct BacktestReport {
    std::vector<BacktestRow> rows;
};

/// Expanding-window backtest. For each test length L the training window
/// starts at length L; every fold fits on the window, forecasts the next L
/// points in one batch, scores them, then absorbs them into the window.
/// Folds whose fit fails (throws or does not converge) are skipped and
/// counted, not fatal.
inline BacktestReport rolling_backtest(const std::vector<double>& series, const ArimaOrder& order,
                                       const std::vector<std::size_t>& test_lengths) {
    const std::size_t n = series.size();
    const std::size_t min_fit =
        20 + static_cast<std::size_t>(order.p + order.d + order.q);
    BacktestReport report;
    for (const std::size_t len : test_lengths) {
        if (len == 0) throw std::invalid_argument("test length must be positive");
        if (2 * len >= n)
            throw std::invalid_argument("test length " + std::to_string(len) +
                                        " must be below half the series length");
        // Early windows below the fit's minimum length become skipped folds,
        // but at least the final window has to be fittable.
        const std::size_t last_window = ((n - len) / len) * len;
        if (last_window < min_fit)
            throw std::invalid_argument("every training window for test length " +
                                        std::to_string(len) +
                                        " is shorter than the minimum fit window " +
                                        std::to_string(min_fit));
        BacktestRow row;
        row.test_length = len;
        double sse = 0.0;
        std::size_t n_pred = 0;
        for (std::size_t end = len; end + len <= n; end += len) {
            const std::vector<double> window(series.begin(),
                                             series.begin() + static_cast<std::ptrdiff_t>(end));
            const std::vector<double> observed(
                series.begin() + static_cast<std::ptrdiff_t>(end),
                series.begin() + static_cast<std::ptrdiff_t>(end + len));
            try {
                const FittedArima f = fit(window, order);
                if (!f.converged) throw NumericError("fold fit did not converge");
                const ForecastResult fc = forecast(f, window, len);
                for (std::size_t i = 0; i < len; ++i) {
                    const double e = fc.point[i] - observed[i];
                    sse += e * e;
                }
                n_pred += len;
                ++row.n_windows;
            } catch (const std::exception&) {
                ++row.n_skipped;
            }
        }
        if (n_pred > 0) row.mse = sse / static_cast<double>(n_pred);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace tsa
