#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsa {

/// Proleptic Gregorian calendar date. Arithmetic works on a serial day
/// number (days since 1970-01-01), which is also what the daily grid and
/// the spline abscissae use.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    friend bool operator==(const Date&, const Date&) = default;
};

namespace detail {

inline bool is_leap(int y) {
    return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

inline int days_in_month(int y, int m) {
    static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[m - 1];
}

}  // namespace detail

/// Days since 1970-01-01 (Howard Hinnant's civil-days algorithm).
inline std::int64_t to_serial(const Date& ymd) {
    const int y = ymd.year - (ymd.month <= 2);
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(ymd.month + (ymd.month > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(ymd.day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline Date from_serial(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

inline bool operator<(const Date& a, const Date& b) { return to_serial(a) < to_serial(b); }
inline bool operator>(const Date& a, const Date& b) { return b < a; }
inline bool operator<=(const Date& a, const Date& b) { return !(b < a); }
inline bool operator>=(const Date& a, const Date& b) { return !(a < b); }

inline Date operator+(const Date& d, std::int64_t days) { return from_serial(to_serial(d) + days); }

/// Inclusive day count between two dates; b must not precede a.
inline std::int64_t day_span(const Date& a, const Date& b) {
    return to_serial(b) - to_serial(a) + 1;
}

/// Strict ISO-8601 (YYYY-MM-DD). Throws std::invalid_argument on anything else.
inline Date parse_date(std::string_view s) {
    auto fail = [&] {
        throw std::invalid_argument("malformed date '" + std::string(s) + "', expected YYYY-MM-DD");
    };
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') fail();
    auto digits = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (s[i] < '0' || s[i] > '9') fail();
            v = v * 10 + (s[i] - '0');
        }
        return v;
    };
    Date d{digits(0, 4), digits(5, 2), digits(8, 2)};
    if (d.month < 1 || d.month > 12) fail();
    if (d.day < 1 || d.day > detail::days_in_month(d.year, d.month)) fail();
    return d;
}

inline std::string to_string(const Date& d) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return std::string(buf);
}

}  // namespace tsa
