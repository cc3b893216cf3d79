#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tsa/arima.hpp"
#include "tsa/date.hpp"
#include "tsa/errors.hpp"
#include "tsa/evaluation.hpp"
#include "tsa/series.hpp"
#include "tsa/spline.hpp"
#include "tsa/stats.hpp"
#include "tsa/unitroot.hpp"

namespace tsa {

/// Shortest round-trip decimal form; locale-independent and deterministic,
/// so repeated runs emit byte-identical files.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(std::string_view(line).substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

}  // namespace detail

/// Read one value column of a dated CSV. The header row must contain both
/// column names; rows may come in any order. An empty value field means the
/// observation is missing and the row is dropped for this column; anything
/// non-numeric is an error naming the offending row. Duplicate dates are an
/// error as well.
inline RawSeries load_csv(const std::string& path, const std::string& column,
                          const std::string& date_column = "Date") {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
    const auto header = detail::split_csv_line(line);

    std::ptrdiff_t date_idx = -1, value_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == date_column) date_idx = static_cast<std::ptrdiff_t>(i);
        if (header[i] == column) value_idx = static_cast<std::ptrdiff_t>(i);
    }
    auto list_columns = [&] {
        std::string s;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) s += ", ";
            s += header[i];
        }
        return s;
    };
    if (date_idx < 0)
        throw ColumnNotFoundError("date column '" + date_column + "' not found in '" + path +
                                  "'; available columns: " + list_columns());
    if (value_idx < 0)
        throw ColumnNotFoundError("column '" + column + "' not found in '" + path +
                                  "'; available columns: " + list_columns());

    struct Row {
        Date date;
        double value;
        std::size_t line_no;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() <= static_cast<std::size_t>(std::max(date_idx, value_idx)))
            throw DataError("row " + std::to_string(line_no) + " of '" + path +
                            "' has too few fields");
        const std::string& date_str = fields[static_cast<std::size_t>(date_idx)];
        const std::string& value_str = fields[static_cast<std::size_t>(value_idx)];
        if (value_str.empty()) continue;  // missing observation
        Date date;
        try {
            date = parse_date(date_str);
        } catch (const std::invalid_argument& e) {
            throw DataError("row " + std::to_string(line_no) + " of '" + path + "': " + e.what());
        }
        double value = 0.0;
        const char* first = value_str.data();
        const char* last = first + value_str.size();
        const auto res = std::from_chars(first, last, value);
        if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(value))
            throw DataError("row " + std::to_string(line_no) + " of '" + path +
                            "': non-numeric value '" + value_str + "' in column '" + column +
                            "'");
        rows.push_back({date, value, line_no});
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].date == rows[i - 1].date)
            throw DataError("duplicate date " + to_string(rows[i].date) + " in '" + path +
                            "' (rows " + std::to_string(rows[i - 1].line_no) + " and " +
                            std::to_string(rows[i].line_no) + ")");
    }

    RawSeries series;
    series.column_name = column;
    series.observations.reserve(rows.size());
    for (const auto& r : rows) series.observations.push_back({r.date, r.value});
    return series;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
}

/// `date,value` rows; missing slots keep an empty value field.
inline std::string grid_csv(const TimeSeries& ts) {
    std::string s = "date,value\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        s += to_string(ts.date_at(i));
        s += ',';
        if (ts.values[i]) s += format_double(*ts.values[i]);
        s += '\n';
    }
    return s;
}

/// `date,value,was_interpolated` rows for an interpolated series.
inline std::string filled_csv(const TimeSeries& filled, const std::vector<std::size_t>& indices) {
    std::vector<bool> flag(filled.size(), false);
    for (std::size_t i : indices) flag[i] = true;
    std::string s = "date,value,was_interpolated\n";
    for (std::size_t i = 0; i < filled.size(); ++i) {
        s += to_string(filled.date_at(i));
        s += ',';
        s += format_double(filled.values[i].value());
        s += ',';
        s += flag[i] ? '1' : '0';
        s += '\n';
    }
    return s;
}

/// Piecewise coefficients in global-x monomial form.
inline std::string spline_dump_csv(const CubicSpline& spline) {
    std::string s = "interval_index,x_left,x_right,a,b,c,d\n";
    for (std::size_t i = 0; i < spline.pieces.size(); ++i) {
        const auto g = spline.global_coefficients(i);
        s += std::to_string(i);
        s += ',' + format_double(spline.knots_x[i]);
        s += ',' + format_double(spline.knots_x[i + 1]);
        for (double coeff : g) s += ',' + format_double(coeff);
        s += '\n';
    }
    return s;
}

inline std::string correlogram_csv(const Correlogram& cg) {
    std::string s = "lag,coefficient,band\n";
    for (std::size_t k = 1; k <= cg.coefficients.size(); ++k) {
        s += std::to_string(k);
        s += ',' + format_double(cg.coefficients[k - 1]);
        s += ',' + format_double(cg.band);
        s += '\n';
    }
    return s;
}

inline std::string ljung_box_csv(const std::vector<LjungBoxRow>& rows) {
    std::string s = "lag,q_stat,df,p_value\n";
    for (const auto& r : rows) {
        s += std::to_string(r.lag);
        s += ',' + format_double(r.q_stat);
        s += ',' + std::to_string(r.df);
        s += ',' + format_double(r.p_value);
        s += '\n';
    }
    return s;
}

inline std::string order_grid_csv(const OrderGrid& grid) {
    std::string s = "p,q,aic,bic,hqic,converged\n";
    for (int p = 0; p <= grid.p_max; ++p) {
        for (int q = 0; q <= grid.q_max; ++q) {
            const GridCell& c = grid.cell(p, q);
            s += std::to_string(p) + ',' + std::to_string(q);
            s += ',' + format_double(c.aic);
            s += ',' + format_double(c.bic);
            s += ',' + format_double(c.hqic);
            s += ',';
            s += c.converged ? '1' : '0';
            s += '\n';
        }
    }
    return s;
}

inline std::string backtest_csv(const BacktestReport& report) {
    std::string s = "test_length,mse,n_windows\n";
    for (const auto& r : report.rows) {
        s += std::to_string(r.test_length);
        s += ',' + format_double(r.mse);
        s += ',' + std::to_string(r.n_windows);
        s += '\n';
    }
    return s;
}

/// `date,point,stderr,ci_low,ci_high`, dates continuing the daily grid.
inline std::string forecast_csv(const ForecastResult& fc, const Date& first_date) {
    std::string s = "date,point,stderr,ci_low,ci_high\n";
    for (std::size_t h = 0; h < fc.horizon; ++h) {
        s += to_string(first_date + static_cast<std::int64_t>(h));
        s += ',' + format_double(fc.point[h]);
        s += ',' + format_double(fc.std_err[h]);
        s += ',' + format_double(fc.ci_low[h]);
        s += ',' + format_double(fc.ci_high[h]);
        s += '\n';
    }
    return s;
}

inline nlohmann::json adf_to_json(const AdfResult& res, int d) {
    nlohmann::json j;
    j["d"] = d;
    j["adf_statistic"] = res.statistic;
    j["lags_used"] = res.lags_used;
    j["n_effective"] = res.n_effective;
    j["critical_values"] = {{"1%", res.critical_values.pct1},
                            {"5%", res.critical_values.pct5},
                            {"10%", res.critical_values.pct10}};
    j["p_value"] = res.p_bracket;
    j["reject_unit_root_at_5pct"] = res.reject_unit_root_at_5pct;
    return j;
}

inline nlohmann::json fit_to_json(const FittedArima& fitted, const std::string& label) {
    nlohmann::json j;
    j["column"] = label;
    j["model"] = fitted.order.label();
    j["n_obs"] = fitted.n_obs;
    j["converged"] = fitted.converged;
    j["loglik"] = fitted.loglik;
    j["aic"] = fitted.aic;
    j["bic"] = fitted.bic;
    j["hqic"] = fitted.hqic;
    j["sigma2"] = fitted.params.sigma2;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : fitted.coef_table) {
        nlohmann::json row;
        row["name"] = r.name;
        row["coef"] = r.coef;
        row["std_err"] = r.std_err;
        row["z"] = r.z;
        row["p"] = r.p;
        row["ci_low"] = r.ci_low;
        row["ci_high"] = r.ci_high;
        rows.push_back(row);
    }
    j["coefficients"] = rows;
    return j;
}

}  // namespace tsa
