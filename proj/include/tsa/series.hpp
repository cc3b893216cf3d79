#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tsa/date.hpp"
#include "tsa/errors.hpp"

namespace tsa {

struct Observation {
    Date date;
    double value = 0.0;
};

/// One column of a CSV file: dated observations, strictly increasing dates.
struct RawSeries {
    std::vector<Observation> observations;
    std::string column_name;

    std::size_t size() const { return observations.size(); }
    bool empty() const { return observations.empty(); }
};

/// A series aligned to a uniform daily calendar grid. Slot i holds the value
/// for start_date + i days; days absent from the source are std::nullopt.
/// The first and last slots are always present by construction.
struct TimeSeries {
    Date start_date;
    std::vector<std::optional<double>> values;
    std::string column_name;

    std::size_t size() const { return values.size(); }
    Date date_at(std::size_t i) const { return start_date + static_cast<std::int64_t>(i); }

    std::size_t missing_count() const {
        std::size_t k = 0;
        for (const auto& v : values)
            if (!v) ++k;
        return k;
    }

    /// All slots present; result of interpolation or of a gap-free source.
    bool is_complete() const { return missing_count() == 0; }

    /// Present values only, in grid order. Call is_complete() first if the
    /// positional correspondence matters.
    std::vector<double> dense_values() const {
        std::vector<double> out;
        out.reserve(values.size());
        for (const auto& v : values)
            if (v) out.push_back(*v);
        return out;
    }
};

/// d-times first-differenced values plus the leading source values consumed,
/// kept so the transform is invertible.
struct DifferencedSeries {
    std::vector<double> values;
    std::size_t d = 0;
    std::vector<double> origin;  // first d values of the source series
};

/// Expand a RawSeries onto the daily grid spanning its first and last dates.
inline TimeSeries to_daily_grid(const RawSeries& raw) {
    if (raw.empty()) throw DataError("cannot grid an empty series");
    const auto first = to_serial(raw.observations.front().date);
    const auto last = to_serial(raw.observations.back().date);
    TimeSeries ts;
    ts.start_date = raw.observations.front().date;
    ts.column_name = raw.column_name;
    ts.values.assign(static_cast<std::size_t>(last - first + 1), std::nullopt);
    for (const auto& obs : raw.observations)
        ts.values[static_cast<std::size_t>(to_serial(obs.date) - first)] = obs.value;
    return ts;
}

/// Apply first differencing d times. Requires length > d.
inline DifferencedSeries difference(const std::vector<double>& values, std::size_t d) {
    if (values.size() <= d)
        throw std::invalid_argument("series of length " + std::to_string(values.size()) +
                                    " too short to difference " + std::to_string(d) + " times");
    DifferencedSeries out;
    out.d = d;
    out.origin.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(d));
    out.values = values;
    for (std::size_t round = 0; round < d; ++round) {
        for (std::size_t i = out.values.size() - 1; i > 0; --i)
            out.values[i] -= out.values[i - 1];
        out.values.erase(out.values.begin());
    }
    return out;
}

/// Exact inverse of difference(): rebuilds the source series from the
/// differenced values and the stored origin.
inline std::vector<double> undifference(const DifferencedSeries& diff) {
    if (diff.origin.size() != diff.d)
        throw std::invalid_argument("origin length " + std::to_string(diff.origin.size()) +
                                    " does not match differencing order " + std::to_string(diff.d));
    // heads[j] = first element of the j-times-differenced source, j = 0..d-1
    std::vector<double> heads = diff.origin;
    for (std::size_t j = 1; j < diff.d; ++j)
        for (std::size_t i = diff.d - 1; i >= j; --i)
            heads[i] -= heads[i - 1];

    std::vector<double> cur = diff.values;
    for (std::size_t j = diff.d; j-- > 0;) {
        std::vector<double> up(cur.size() + 1);
        up[0] = heads[j];
        for (std::size_t i = 0; i < cur.size(); ++i) up[i + 1] = up[i] + cur[i];
        cur = std::move(up);
    }
    return cur;
}

}  // namespace tsa
