// Command-line front end for the toolkit: gap filling, stationarity
// testing, order selection, fitting, diagnostics, backtesting, forecasting,
// and a simulator for generating reproducible fixtures.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tsa/tsa.hpp"

namespace {

struct PipelineConfig {
    std::string input_path;
    std::string date_column = "Date";
    std::string value_column;
    std::string boundary_kind = "natural";
    int d_max = 2;
    int p_max = 5;
    int q_max = 5;
    std::string criterion = "bic";
    std::string adf_alpha = "5%";
    std::size_t diagnostics_max_lag = 10;
    std::size_t forecast_horizon = 31;
    std::string output_dir = ".";
    bool df_adjust = false;
};

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

/// Flat `key = value` file, UTF-8, '#' comments. Unknown keys are refused so
/// typos do not silently fall back to defaults.
void load_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tsa::DataError("cannot open config file '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "input_path") cfg.input_path = value;
        else if (key == "date_column") cfg.date_column = value;
        else if (key == "value_column") cfg.value_column = value;
        else if (key == "boundary_kind") cfg.boundary_kind = value;
        else if (key == "d_max") cfg.d_max = std::stoi(value);
        else if (key == "p_max") cfg.p_max = std::stoi(value);
        else if (key == "q_max") cfg.q_max = std::stoi(value);
        else if (key == "criterion") cfg.criterion = value;
        else if (key == "adf_alpha") cfg.adf_alpha = value;
        else if (key == "diagnostics_max_lag") cfg.diagnostics_max_lag = std::stoul(value);
        else if (key == "forecast_horizon") cfg.forecast_horizon = std::stoul(value);
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "df_adjust") cfg.df_adjust = parse_bool(value);
        else
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
    }
}

double alpha_critical(const tsa::AdfCriticalValues& cv, const std::string& alpha) {
    if (alpha == "1%") return cv.pct1;
    if (alpha == "5%") return cv.pct5;
    if (alpha == "10%") return cv.pct10;
    throw std::invalid_argument("adf_alpha must be one of 1%, 5%, 10%");
}

tsa::ArimaOrder parse_order(const std::string& text) {
    int p = 0, d = 0, q = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    if (!(ss >> p >> c1 >> d >> c2 >> q) || c1 != ',' || c2 != ',' || !ss.eof())
        throw std::invalid_argument("--order expects p,d,q (got '" + text + "')");
    const auto order = tsa::ArimaOrder::with_default_constant(p, d, q);
    order.validate();
    return order;
}

std::filesystem::path artifact_path(const PipelineConfig& cfg, const std::string& prefix,
                                    const std::string& suffix) {
    std::filesystem::create_directories(cfg.output_dir);
    return std::filesystem::path(cfg.output_dir) / (prefix + suffix);
}

/// Load the requested column, align to the daily grid.
tsa::TimeSeries load_grid(const PipelineConfig& cfg) {
    if (cfg.input_path.empty()) throw std::invalid_argument("--input is required");
    if (cfg.value_column.empty()) throw std::invalid_argument("--column is required");
    const auto raw = tsa::load_csv(cfg.input_path, cfg.value_column, cfg.date_column);
    return tsa::to_daily_grid(raw);
}

/// Gap-free values for the model stages; gaps are a data error there.
std::vector<double> load_complete_values(const PipelineConfig& cfg, tsa::Date* start = nullptr,
                                         tsa::Date* last = nullptr) {
    const auto grid = load_grid(cfg);
    if (!grid.is_complete())
        throw tsa::DataError("'" + cfg.value_column + "' has " +
                             std::to_string(grid.missing_count()) +
                             " missing days; run the interpolate stage first");
    if (start) *start = grid.start_date;
    if (last) *last = grid.date_at(grid.size() - 1);
    return grid.dense_values();
}

struct AdfLoopResult {
    std::vector<std::pair<int, tsa::AdfResult>> tests;
    int selected_d = 0;
    bool rejected = false;
};

/// The test-difference feedback loop: difference until the unit root is
/// rejected at the configured level, capped at d_max.
AdfLoopResult adf_selection_loop(const std::vector<double>& values, const PipelineConfig& cfg) {
    AdfLoopResult out;
    for (int d = 0; d <= cfg.d_max; ++d) {
        const auto diffed = tsa::difference(values, static_cast<std::size_t>(d));
        const auto res = tsa::adf_test(diffed.values);
        out.tests.emplace_back(d, res);
        out.selected_d = d;
        out.rejected = res.statistic < alpha_critical(res.critical_values, cfg.adf_alpha);
        if (out.rejected) break;
    }
    return out;
}

nlohmann::json adf_loop_json(const AdfLoopResult& loop, const std::string& prefix) {
    nlohmann::json j;
    j["column"] = prefix;
    j["selected_d"] = loop.selected_d;
    j["rejected_at_selected_d"] = loop.rejected;
    nlohmann::json tests = nlohmann::json::array();
    for (const auto& [d, res] : loop.tests) tests.push_back(tsa::adf_to_json(res, d));
    j["tests"] = tests;
    return j;
}

/// Whiteness gate of the auto pipeline: every Ljung-Box p-value at lags
/// 1..max_lag must clear 0.05.
bool white_noise_gate(const std::vector<tsa::LjungBoxRow>& rows) {
    for (const auto& r : rows)
        if (!(r.p_value > 0.05)) return false;
    return true;
}

std::vector<tsa::LjungBoxRow> fit_diagnostics(const tsa::FittedArima& fitted,
                                              const PipelineConfig& cfg) {
    return tsa::ljung_box(fitted.clean_residuals(), cfg.diagnostics_max_lag,
                          static_cast<std::size_t>(fitted.order.p + fitted.order.q),
                          cfg.df_adjust);
}

nlohmann::json fit_json_with_gate(const tsa::FittedArima& fitted,
                                  const std::vector<tsa::LjungBoxRow>& diag,
                                  const std::string& prefix, const PipelineConfig& cfg) {
    nlohmann::json j = tsa::fit_to_json(fitted, prefix);
    j["ljung_box_max_lag"] = cfg.diagnostics_max_lag;
    j["white_noise_gate_passed"] = white_noise_gate(diag);
    return j;
}

// ---------------------------------------------------------------- commands

int cmd_interpolate(const PipelineConfig& cfg, const std::string& prefix,
                    const std::string& spline_dump, const std::string& grid_dump) {
    const auto grid = load_grid(cfg);
    const auto boundary = tsa::boundary_from_string(cfg.boundary_kind);
    if (!grid_dump.empty()) {
        tsa::write_text_file(grid_dump, tsa::grid_csv(grid));
        std::cout << "raw grid -> " << grid_dump << "\n";
    }
    const auto result = tsa::interpolate_missing(grid, boundary);
    const auto path = artifact_path(cfg, prefix, "_filled.csv");
    tsa::write_text_file(path.string(), tsa::filled_csv(result.series, result.filled_indices));
    std::cout << "filled " << result.filled_indices.size() << " of " << grid.size()
              << " slots -> " << path.string() << "\n";
    if (!spline_dump.empty()) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid.values[i]) {
                xs.push_back(static_cast<double>(i));
                ys.push_back(*grid.values[i]);
            }
        }
        const auto spline = tsa::fit_cubic_spline(xs, ys, boundary);
        tsa::write_text_file(spline_dump, tsa::spline_dump_csv(spline));
        std::cout << "spline dump -> " << spline_dump << "\n";
    }
    return 0;
}

int cmd_adf(const PipelineConfig& cfg, const std::string& prefix, int d, bool auto_d) {
    const auto values = load_complete_values(cfg);
    nlohmann::json j;
    if (auto_d) {
        const auto loop = adf_selection_loop(values, cfg);
        j = adf_loop_json(loop, prefix);
        std::cout << "selected d = " << loop.selected_d
                  << (loop.rejected ? "" : " (never rejected; capped at d_max)") << "\n";
    } else {
        const auto diffed = tsa::difference(values, static_cast<std::size_t>(d));
        const auto res = tsa::adf_test(diffed.values);
        j = tsa::adf_to_json(res, d);
        j["column"] = prefix;
        std::cout << "d = " << d << ": statistic " << res.statistic << ", " << res.p_bracket
                  << (res.reject_unit_root_at_5pct ? " (stationary at 5%)"
                                                   : " (unit root not rejected)")
                  << "\n";
    }
    const auto path = artifact_path(cfg, prefix, "_adf.json");
    tsa::write_text_file(path.string(), j.dump(2) + "\n");
    std::cout << "report -> " << path.string() << "\n";
    return 0;
}

int cmd_acf(const PipelineConfig& cfg, const std::string& prefix, int d, std::size_t max_lag) {
    const auto values = load_complete_values(cfg);
    const auto diffed = tsa::difference(values, static_cast<std::size_t>(d));
    const auto a = tsa::acf(diffed.values, max_lag);
    const auto p = tsa::pacf(diffed.values, max_lag);
    const auto acf_path = artifact_path(cfg, prefix, "_acf.csv");
    const auto pacf_path = artifact_path(cfg, prefix, "_pacf.csv");
    tsa::write_text_file(acf_path.string(), tsa::correlogram_csv(a));
    tsa::write_text_file(pacf_path.string(), tsa::correlogram_csv(p));
    std::cout << "correlograms -> " << acf_path.string() << ", " << pacf_path.string() << "\n";
    return 0;
}

int cmd_grid(const PipelineConfig& cfg, const std::string& prefix, int d, unsigned threads) {
    const auto values = load_complete_values(cfg);
    const auto grid = tsa::grid_search(values, d, cfg.p_max, cfg.q_max, threads);
    const auto path = artifact_path(cfg, prefix, "_grid.csv");
    tsa::write_text_file(path.string(), tsa::order_grid_csv(grid));
    std::cout << "best by aic: (" << grid.best_by_aic.first << "," << grid.best_by_aic.second
              << ")  best by bic: (" << grid.best_by_bic.first << "," << grid.best_by_bic.second
              << ")\n";
    std::cout << "grid -> " << path.string() << "\n";
    return 0;
}

int cmd_fit(const PipelineConfig& cfg, const std::string& prefix, const tsa::ArimaOrder& order) {
    const auto values = load_complete_values(cfg);
    const auto fitted = tsa::fit(values, order);
    const auto diag = fit_diagnostics(fitted, cfg);
    const auto fit_path = artifact_path(cfg, prefix, "_fit.json");
    const auto lb_path = artifact_path(cfg, prefix, "_ljungbox.csv");
    tsa::write_text_file(fit_path.string(),
                         fit_json_with_gate(fitted, diag, prefix, cfg).dump(2) + "\n");
    tsa::write_text_file(lb_path.string(), tsa::ljung_box_csv(diag));
    std::cout << fitted.order.label() << ": loglik " << fitted.loglik << ", aic " << fitted.aic
              << ", bic " << fitted.bic << (fitted.converged ? "" : " [NOT CONVERGED]") << "\n";
    std::cout << "fit -> " << fit_path.string() << "\nljung-box -> " << lb_path.string() << "\n";
    return fitted.converged ? 0 : 3;
}

int cmd_forecast(const PipelineConfig& cfg, const std::string& prefix,
                 const tsa::ArimaOrder& order) {
    tsa::Date last{};
    const auto values = load_complete_values(cfg, nullptr, &last);
    const auto fitted = tsa::fit(values, order);
    const auto fc = tsa::forecast(fitted, values, cfg.forecast_horizon);
    const auto path = artifact_path(cfg, prefix, "_forecast.csv");
    tsa::write_text_file(path.string(), tsa::forecast_csv(fc, last + 1));
    std::cout << "forecast " << fc.horizon << " steps -> " << path.string() << "\n";
    return 0;
}

int cmd_backtest(const PipelineConfig& cfg, const std::string& prefix,
                 const tsa::ArimaOrder& order, const std::vector<std::size_t>& lengths) {
    const auto values = load_complete_values(cfg);
    const auto report = tsa::rolling_backtest(values, order, lengths);
    const auto path = artifact_path(cfg, prefix, "_backtest.csv");
    tsa::write_text_file(path.string(), tsa::backtest_csv(report));
    for (const auto& row : report.rows)
        std::cout << "test length " << row.test_length << ": mse " << row.mse << " over "
                  << row.n_windows << " windows"
                  << (row.n_skipped ? " (" + std::to_string(row.n_skipped) + " skipped)" : "")
                  << "\n";
    std::cout << "backtest -> " << path.string() << "\n";
    return 0;
}

int cmd_auto(const PipelineConfig& cfg, const std::string& prefix, std::size_t acf_max_lag,
             unsigned threads) {
    const auto grid_series = load_grid(cfg);
    const auto boundary = tsa::boundary_from_string(cfg.boundary_kind);

    // 1. gap filling
    const auto interp = tsa::interpolate_missing(grid_series, boundary);
    tsa::write_text_file(artifact_path(cfg, prefix, "_filled.csv").string(),
                         tsa::filled_csv(interp.series, interp.filled_indices));
    const auto values = interp.series.dense_values();
    std::cout << "[1/6] interpolate: filled " << interp.filled_indices.size() << " of "
              << grid_series.size() << " slots\n";

    // 2. stationarity loop
    const auto loop = adf_selection_loop(values, cfg);
    tsa::write_text_file(artifact_path(cfg, prefix, "_adf.json").string(),
                         adf_loop_json(loop, prefix).dump(2) + "\n");
    const int d = loop.selected_d;
    std::cout << "[2/6] adf: selected d = " << d
              << (loop.rejected ? "" : " (capped at d_max without rejection)") << "\n";

    // 3. correlograms of the differenced series
    const auto diffed = tsa::difference(values, static_cast<std::size_t>(d));
    tsa::write_text_file(artifact_path(cfg, prefix, "_acf.csv").string(),
                         tsa::correlogram_csv(tsa::acf(diffed.values, acf_max_lag)));
    tsa::write_text_file(artifact_path(cfg, prefix, "_pacf.csv").string(),
                         tsa::correlogram_csv(tsa::pacf(diffed.values, acf_max_lag)));
    std::cout << "[3/6] correlograms at max lag " << acf_max_lag << "\n";

    // 4. order selection
    const auto grid = tsa::grid_search(values, d, cfg.p_max, cfg.q_max, threads);
    tsa::write_text_file(artifact_path(cfg, prefix, "_grid.csv").string(),
                         tsa::order_grid_csv(grid));
    const auto criterion = tsa::criterion_from_string(cfg.criterion);
    const auto candidates = grid.ranked(criterion);
    if (candidates.empty()) throw tsa::NumericError("no grid cell converged");
    std::cout << "[4/6] grid: best by " << cfg.criterion << " = (" << candidates[0].first << ","
              << candidates[0].second << ")\n";

    // 5. fit + whiteness gate over up to 3 candidates
    std::optional<tsa::FittedArima> chosen;
    std::vector<tsa::LjungBoxRow> chosen_diag;
    bool gate_passed = false;
    for (std::size_t i = 0; i < candidates.size() && i < 3; ++i) {
        const auto order =
            tsa::ArimaOrder::with_default_constant(candidates[i].first, d, candidates[i].second);
        const auto fitted = tsa::fit(values, order);
        const auto diag = fit_diagnostics(fitted, cfg);
        const bool ok = white_noise_gate(diag);
        std::cout << "[5/6] " << order.label() << (ok ? " passes" : " fails")
                  << " the Ljung-Box gate\n";
        if (!chosen) {
            chosen = fitted;
            chosen_diag = diag;
        }
        if (ok) {
            chosen = fitted;
            chosen_diag = diag;
            gate_passed = true;
            break;
        }
    }
    if (!gate_passed)
        std::cerr << "warning: no candidate passed the white-noise gate; "
                     "writing the best-criterion fit\n";
    tsa::write_text_file(artifact_path(cfg, prefix, "_fit.json").string(),
                         fit_json_with_gate(*chosen, chosen_diag, prefix, cfg).dump(2) + "\n");
    tsa::write_text_file(artifact_path(cfg, prefix, "_ljungbox.csv").string(),
                         tsa::ljung_box_csv(chosen_diag));

    // 6. forecast
    const auto fc = tsa::forecast(*chosen, values, cfg.forecast_horizon);
    const tsa::Date last = interp.series.date_at(interp.series.size() - 1);
    tsa::write_text_file(artifact_path(cfg, prefix, "_forecast.csv").string(),
                         tsa::forecast_csv(fc, last + 1));
    std::cout << "[6/6] " << chosen->order.label() << " forecast " << fc.horizon
              << " steps; artifacts in " << cfg.output_dir << "\n";
    return gate_passed ? 0 : 3;
}

int cmd_simulate(const PipelineConfig& cfg, const std::string& column,
                 const tsa::ArimaOrder& order, std::vector<double> phi, std::vector<double> theta,
                 double constant, double sigma, std::size_t n_days, std::size_t rows,
                 double gap_rate, const std::string& start_date_str, double start_value,
                 std::uint64_t seed, std::size_t burnin, std::string output) {
    if (phi.size() != static_cast<std::size_t>(order.p))
        throw std::invalid_argument("--phi must list exactly p coefficients");
    if (theta.size() != static_cast<std::size_t>(order.q))
        throw std::invalid_argument("--theta must list exactly q coefficients");
    tsa::ArmaSimSpec spec;
    spec.phi = std::move(phi);
    spec.theta = std::move(theta);
    spec.constant = constant;
    spec.sigma = sigma;
    spec.burnin = burnin;

    tsa::NormalRng rng(seed);
    const auto levels =
        tsa::simulate_arima(spec, static_cast<std::size_t>(order.d), n_days, rng, start_value);

    std::size_t keep = rows > 0 ? rows : n_days;
    if (gap_rate > 0.0) {
        if (gap_rate >= 1.0) throw std::invalid_argument("--gap-rate must be below 1");
        keep = std::max<std::size_t>(2, n_days - static_cast<std::size_t>(gap_rate * n_days));
    }
    const auto kept = tsa::sample_present_indices(n_days, keep, rng);

    const tsa::Date start = tsa::parse_date(start_date_str);
    std::string csv = cfg.date_column + "," + column + "\n";
    for (const std::size_t i : kept) {
        csv += tsa::to_string(start + static_cast<std::int64_t>(i));
        csv += ',' + tsa::format_double(levels[i]) + '\n';
    }
    if (output.empty())
        output = artifact_path(cfg, column, "_sim.csv").string();
    tsa::write_text_file(output, csv);
    std::cout << "simulated " << order.label() << " series: " << kept.size() << " rows over "
              << n_days << " days -> " << output << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    PipelineConfig cfg;

    // apply the config file (if any) before binding flag defaults, so that
    // command-line flags override file values
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        try {
            if (arg == "--config" && i + 1 < argc) {
                load_config_file(cfg, argv[i + 1]);
            } else if (arg.rfind("--config=", 0) == 0) {
                load_config_file(cfg, arg.substr(9));
            }
        } catch (const tsa::DataError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    CLI::App app{"spline-interpolation + ARIMA forecasting toolkit"};
    app.require_subcommand(1);

    std::string prefix_flag;
    std::string config_path;  // consumed above; registered so CLI11 accepts it

    auto add_common = [&](CLI::App* sub, bool needs_column) {
        sub->add_option("--input,-i", cfg.input_path, "input CSV path");
        sub->add_option("--date-column", cfg.date_column, "date column name");
        if (needs_column) sub->add_option("--column,-c", cfg.value_column, "value column name");
        sub->add_option("--output-dir,-o", cfg.output_dir, "artifact directory");
        sub->add_option("--config", config_path, "flat key=value config file");
        sub->add_option("--prefix", prefix_flag,
                        "artifact name prefix (defaults to the column name)");
    };
    auto prefix = [&]() { return prefix_flag.empty() ? cfg.value_column : prefix_flag; };

    const unsigned default_threads = std::max(1u, std::thread::hardware_concurrency());

    // interpolate
    auto* sub_interp = app.add_subcommand("interpolate", "fill gaps by cubic spline");
    std::string spline_dump, grid_dump;
    add_common(sub_interp, true);
    sub_interp->add_option("--boundary", cfg.boundary_kind, "natural|not_a_knot|periodic");
    sub_interp->add_option("--spline-dump", spline_dump, "also write piecewise coefficients");
    sub_interp->add_option("--grid-dump", grid_dump,
                           "also write the pre-interpolation grid (empty = missing)");

    // adf
    auto* sub_adf = app.add_subcommand("adf", "augmented Dickey-Fuller test");
    int adf_d = 0;
    bool adf_auto_d = false;
    add_common(sub_adf, true);
    sub_adf->add_option("--d", adf_d, "difference the series this many times first");
    sub_adf->add_flag("--auto-d", adf_auto_d, "increase d until the test rejects (<= d_max)");
    sub_adf->add_option("--d-max", cfg.d_max, "cap for --auto-d");
    sub_adf->add_option("--adf-alpha", cfg.adf_alpha, "rejection level: 1%, 5%, 10%");

    // acf
    auto* sub_acf = app.add_subcommand("acf", "ACF and PACF correlograms");
    int acf_d = 0;
    std::size_t acf_lag = 40;
    add_common(sub_acf, true);
    sub_acf->add_option("--d", acf_d, "difference the series this many times first");
    sub_acf->add_option("--max-lag", acf_lag, "largest lag to report");

    // grid
    auto* sub_grid = app.add_subcommand("grid", "AIC/BIC/HQIC order-selection grid");
    int grid_d = 0;
    unsigned grid_threads = default_threads;
    add_common(sub_grid, true);
    sub_grid->add_option("--d", grid_d, "differencing order of every candidate");
    sub_grid->add_option("--p-max", cfg.p_max, "largest AR order");
    sub_grid->add_option("--q-max", cfg.q_max, "largest MA order");
    sub_grid->add_option("--threads", grid_threads, "parallel cell fits");

    // fit
    auto* sub_fit = app.add_subcommand("fit", "fit one ARIMA order and report");
    std::string fit_order;
    add_common(sub_fit, true);
    sub_fit->add_option("--order", fit_order, "p,d,q")->required();
    sub_fit->add_option("--diagnostics-max-lag", cfg.diagnostics_max_lag,
                        "Ljung-Box lags in the report");
    sub_fit->add_flag("--df-adjust", cfg.df_adjust,
                      "subtract the fitted-parameter count from the Ljung-Box df");

    // forecast
    auto* sub_fc = app.add_subcommand("forecast", "fit and forecast forward");
    std::string fc_order;
    add_common(sub_fc, true);
    sub_fc->add_option("--order", fc_order, "p,d,q")->required();
    sub_fc->add_option("--horizon", cfg.forecast_horizon, "steps ahead");

    // backtest
    auto* sub_bt = app.add_subcommand("backtest", "expanding-window MSE evaluation");
    std::string bt_order;
    std::vector<std::size_t> bt_lengths;
    add_common(sub_bt, true);
    sub_bt->add_option("--order", bt_order, "p,d,q")->required();
    sub_bt->add_option("--test-lengths", bt_lengths, "comma-separated test set lengths")
        ->required()
        ->delimiter(',');

    // auto
    auto* sub_auto = app.add_subcommand("auto", "full pipeline: interpolate through forecast");
    std::size_t auto_acf_lag = 40;
    unsigned auto_threads = default_threads;
    add_common(sub_auto, true);
    sub_auto->add_option("--boundary", cfg.boundary_kind, "spline boundary condition");
    sub_auto->add_option("--d-max", cfg.d_max, "differencing cap");
    sub_auto->add_option("--p-max", cfg.p_max, "largest AR order");
    sub_auto->add_option("--q-max", cfg.q_max, "largest MA order");
    sub_auto->add_option("--criterion", cfg.criterion, "aic|bic|hqic");
    sub_auto->add_option("--adf-alpha", cfg.adf_alpha, "ADF rejection level");
    sub_auto->add_option("--diagnostics-max-lag", cfg.diagnostics_max_lag, "Ljung-Box lags");
    sub_auto->add_option("--horizon", cfg.forecast_horizon, "forecast steps");
    sub_auto->add_option("--acf-max-lag", auto_acf_lag, "correlogram lags");
    sub_auto->add_option("--threads", auto_threads, "parallel grid fits");
    sub_auto->add_flag("--df-adjust", cfg.df_adjust, "Ljung-Box df adjustment");

    // simulate
    auto* sub_sim = app.add_subcommand("simulate", "generate a seeded ARIMA fixture CSV");
    std::string sim_order_text = "0,1,0";
    std::vector<double> sim_phi, sim_theta;
    double sim_constant = 0.0, sim_sigma = 1.0, sim_gap_rate = 0.0, sim_start_value = 50.0;
    std::size_t sim_days = 1000, sim_rows = 0, sim_burnin = 200;
    std::uint64_t sim_seed = 1;
    std::string sim_start_date = "2010-01-04", sim_output, sim_column = "Open";
    sub_sim->add_option("--order", sim_order_text, "p,d,q of the generating model");
    sub_sim->add_option("--phi", sim_phi, "AR coefficients")->delimiter(',');
    sub_sim->add_option("--theta", sim_theta, "MA coefficients")->delimiter(',');
    sub_sim->add_option("--constant", sim_constant, "constant term");
    sub_sim->add_option("--sigma", sim_sigma, "innovation standard deviation");
    sub_sim->add_option("--n-days", sim_days, "calendar span in days");
    sub_sim->add_option("--rows", sim_rows, "rows to keep (gaps elsewhere)");
    sub_sim->add_option("--gap-rate", sim_gap_rate, "fraction of days to drop instead of --rows");
    sub_sim->add_option("--start-date", sim_start_date, "first calendar date");
    sub_sim->add_option("--start-value", sim_start_value, "level anchor");
    sub_sim->add_option("--seed", sim_seed, "RNG seed");
    sub_sim->add_option("--burnin", sim_burnin, "simulation burn-in length");
    sub_sim->add_option("--output", sim_output, "output CSV path");
    sub_sim->add_option("--column", sim_column, "value column name");
    sub_sim->add_option("--date-column", cfg.date_column, "date column name");
    sub_sim->add_option("--output-dir,-o", cfg.output_dir, "artifact directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sub_interp->parsed()) return cmd_interpolate(cfg, prefix(), spline_dump, grid_dump);
        if (sub_adf->parsed()) return cmd_adf(cfg, prefix(), adf_d, adf_auto_d);
        if (sub_acf->parsed()) return cmd_acf(cfg, prefix(), acf_d, acf_lag);
        if (sub_grid->parsed()) return cmd_grid(cfg, prefix(), grid_d, grid_threads);
        if (sub_fit->parsed()) return cmd_fit(cfg, prefix(), parse_order(fit_order));
        if (sub_fc->parsed()) return cmd_forecast(cfg, prefix(), parse_order(fc_order));
        if (sub_bt->parsed()) return cmd_backtest(cfg, prefix(), parse_order(bt_order), bt_lengths);
        if (sub_auto->parsed()) return cmd_auto(cfg, prefix(), auto_acf_lag, auto_threads);
        if (sub_sim->parsed())
            return cmd_simulate(cfg, sim_column, parse_order(sim_order_text), sim_phi, sim_theta,
                                sim_constant, sim_sigma, sim_days, sim_rows, sim_gap_rate,
                                sim_start_date, sim_start_value, sim_seed, sim_burnin, sim_output);
    } catch (const tsa::ColumnNotFoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tsa::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tsa::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
