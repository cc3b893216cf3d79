#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "tsa/io.hpp"
#include "tsa/series.hpp"
#include "tsa/simulate.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

/// Day count oracle independent of the library's serial-day algorithm:
/// classical year/month accumulation.
long day_number(int y, int m, int d) {
    static const int cum[] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};
    const long years = y - 1;
    long leaps = years / 4 - years / 100 + years / 400;
    long n = years * 365 + leaps + cum[m - 1] + d;
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m > 2 && leap) ++n;
    return n;
}

struct TempCsv {
    std::filesystem::path path;
    explicit TempCsv(const std::string& content) {
        path = std::filesystem::temp_directory_path() /
               ("tsa_series_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++) + ".csv");
        std::ofstream out(path);
        out << content;
    }
    ~TempCsv() { std::filesystem::remove(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

}  // namespace

TEST_CASE("load_csv reads back rows sorted by date", "[series]") {
    TempCsv csv("Date,Open,Close\n2010-01-05,10.5,11.0\n2010-01-04,10.0,10.5\n");
    const auto raw = tsa::load_csv(csv.path.string(), "Open");
    REQUIRE(raw.size() == 2);
    CHECK(raw.observations[0].date == tsa::Date{2010, 1, 4});
    CHECK(raw.observations[0].value == 10.0);
    CHECK(raw.observations[1].value == 10.5);
    CHECK(raw.column_name == "Open");
}

TEST_CASE("load_csv rejects duplicate dates naming the rows", "[series]") {
    TempCsv csv("Date,Open\n2010-01-04,10.0\n2010-01-05,10.5\n2010-01-04,11.0\n");
    REQUIRE_THROWS_MATCHES(tsa::load_csv(csv.path.string(), "Open"), tsa::DataError,
                           Catch::Matchers::MessageMatches(ContainsSubstring("2010-01-04") &&
                                                           ContainsSubstring("4")));
}

TEST_CASE("load_csv reports missing columns with the available ones", "[series]") {
    TempCsv csv("Date,Open\n2010-01-04,10.0\n");
    REQUIRE_THROWS_MATCHES(tsa::load_csv(csv.path.string(), "Close"), tsa::ColumnNotFoundError,
                           Catch::Matchers::MessageMatches(ContainsSubstring("Open")));
}

TEST_CASE("load_csv flags non-numeric values with the row number", "[series]") {
    TempCsv csv("Date,Open\n2010-01-04,10.0\n2010-01-05,oops\n");
    REQUIRE_THROWS_MATCHES(tsa::load_csv(csv.path.string(), "Open"), tsa::DataError,
                           Catch::Matchers::MessageMatches(ContainsSubstring("row 3") &&
                                                           ContainsSubstring("oops")));
}

TEST_CASE("load_csv skips rows whose value field is empty", "[series]") {
    TempCsv csv("Date,Open\n2010-01-04,10.0\n2010-01-05,\n2010-01-06,12.0\n");
    const auto raw = tsa::load_csv(csv.path.string(), "Open");
    REQUIRE(raw.size() == 2);
    CHECK(raw.observations[1].date == tsa::Date{2010, 1, 6});
}

TEST_CASE("load_csv on a missing file", "[series]") {
    REQUIRE_THROWS_AS(tsa::load_csv("/nonexistent/nope.csv", "Open"), tsa::DataError);
}

TEST_CASE("bundled fixture has 3272 rows matching its line count", "[series]") {
    const std::string path = std::string(TSA_DATA_DIR) + "/open_gapped.csv";
    std::ifstream in(path);
    REQUIRE(in.good());
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    const auto raw = tsa::load_csv(path, "Open");
    CHECK(raw.size() == lines - 1);  // header
    CHECK(raw.size() == 3272);
    CHECK(raw.observations.front().date == tsa::Date{2010, 1, 4});
    CHECK(raw.observations.back().date == tsa::Date{2022, 12, 3});
}

TEST_CASE("to_daily_grid inserts missing slots for absent days", "[series]") {
    tsa::RawSeries raw;
    raw.column_name = "x";
    raw.observations = {{tsa::Date{2020, 1, 1}, 1.0}, {tsa::Date{2020, 1, 3}, 3.0}};
    const auto grid = tsa::to_daily_grid(raw);
    REQUIRE(grid.size() == 3);
    CHECK(grid.values[0].value() == 1.0);
    CHECK_FALSE(grid.values[1].has_value());
    CHECK(grid.values[2].value() == 3.0);
}

TEST_CASE("to_daily_grid of consecutive dates has no gaps", "[series]") {
    tsa::RawSeries raw;
    raw.observations = {{tsa::Date{2020, 2, 27}, 1.0},
                        {tsa::Date{2020, 2, 28}, 2.0},
                        {tsa::Date{2020, 2, 29}, 3.0},
                        {tsa::Date{2020, 3, 1}, 4.0}};
    const auto grid = tsa::to_daily_grid(raw);
    CHECK(grid.size() == 4);
    CHECK(grid.missing_count() == 0);
}

TEST_CASE("grid span matches the independent day-count oracle", "[series]") {
    tsa::RawSeries raw;
    raw.observations = {{tsa::Date{2010, 1, 4}, 1.0}, {tsa::Date{2022, 12, 3}, 2.0}};
    const auto grid = tsa::to_daily_grid(raw);
    const long expected = day_number(2022, 12, 3) - day_number(2010, 1, 4) + 1;
    CHECK(static_cast<long>(grid.size()) == expected);
    CHECK(grid.size() == 4717);
}

TEST_CASE("to_daily_grid rejects empty input", "[series]") {
    REQUIRE_THROWS_AS(tsa::to_daily_grid(tsa::RawSeries{}), tsa::DataError);
}

TEST_CASE("difference arithmetic", "[series]") {
    const std::vector<double> x{1, 3, 6, 10};
    const auto d1 = tsa::difference(x, 1);
    CHECK(d1.values == std::vector<double>{2, 3, 4});
    CHECK(d1.origin == std::vector<double>{1});

    const auto d2 = tsa::difference(x, 2);
    CHECK(d2.values == std::vector<double>{1, 1});
    CHECK(d2.origin == std::vector<double>{1, 3});

    const auto d0 = tsa::difference(x, 0);
    CHECK(d0.values == x);
    CHECK(d0.origin.empty());
}

TEST_CASE("difference shorter than d+1 fails", "[series]") {
    REQUIRE_THROWS_AS(tsa::difference({1.0, 2.0}, 2), std::invalid_argument);
}

TEST_CASE("differencing once twice equals d=2", "[series]") {
    tsa::NormalRng rng(7);
    std::vector<double> x(50);
    for (auto& v : x) v = rng.normal();
    const auto once = tsa::difference(x, 1);
    const auto twice = tsa::difference(once.values, 1);
    const auto direct = tsa::difference(x, 2);
    REQUIRE(twice.values.size() == direct.values.size());
    for (std::size_t i = 0; i < direct.values.size(); ++i)
        CHECK_THAT(twice.values[i], WithinAbs(direct.values[i], 1e-12));
    CHECK(once.values.size() == x.size() - 1);
}

TEST_CASE("undifference inverts the worked examples", "[series]") {
    tsa::DifferencedSeries d1{{2, 3, 4}, 1, {1}};
    CHECK(tsa::undifference(d1) == std::vector<double>{1, 3, 6, 10});

    tsa::DifferencedSeries d2{{1, 1}, 2, {1, 3}};
    CHECK(tsa::undifference(d2) == std::vector<double>{1, 3, 6, 10});
}

TEST_CASE("undifference rejects origin length mismatch", "[series]") {
    tsa::DifferencedSeries bad{{1, 2}, 2, {1}};
    REQUIRE_THROWS_AS(tsa::undifference(bad), std::invalid_argument);
}

TEST_CASE("difference round-trips on random series", "[series]") {
    tsa::NormalRng rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x(1000);
        for (auto& v : x) v = 100.0 * rng.normal();
        for (std::size_t d : {0u, 1u, 2u}) {
            const auto back = tsa::undifference(tsa::difference(x, d));
            REQUIRE(back.size() == x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                CHECK_THAT(back[i], WithinAbs(x[i], 1e-9));
        }
    }
}

TEST_CASE("grid csv round-trip keeps values and gaps", "[series]") {
    tsa::RawSeries raw;
    raw.column_name = "Open";
    raw.observations = {{tsa::Date{2020, 1, 1}, 1.25},
                        {tsa::Date{2020, 1, 2}, 2.5},
                        {tsa::Date{2020, 1, 4}, -0.125}};
    const auto grid = tsa::to_daily_grid(raw);
    const std::string csv = tsa::grid_csv(grid);
    TempCsv file("date," + raw.column_name + "\n" + csv.substr(csv.find('\n') + 1));
    const auto back = tsa::load_csv(file.path.string(), "Open", "date");
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(back.observations[i].value == raw.observations[i].value);
}
