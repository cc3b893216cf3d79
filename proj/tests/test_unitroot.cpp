#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tsa/simulate.hpp"
#include "tsa/unitroot.hpp"

using Catch::Matchers::WithinAbs;

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::vector<double> random_walk(std::uint64_t seed, std::size_t n, double sigma = 1.0) {
    tsa::NormalRng rng(seed);
    std::vector<double> x(n);
    double level = 0.0;
    for (auto& v : x) {
        level += sigma * rng.normal();
        v = level;
    }
    return x;
}

}  // namespace

TEST_CASE("critical values at large samples match the published table", "[unitroot]") {
    const auto cv = tsa::adf_critical_values(3000);
    CHECK(round2(cv.pct1) == -3.43);
    CHECK(round2(cv.pct5) == -2.86);
    CHECK_THAT(cv.pct10, WithinAbs(-2.56, 0.01));
    CHECK(cv.pct1 < cv.pct5);
    CHECK(cv.pct5 < cv.pct10);
    CHECK(cv.pct10 < 0.0);
}

TEST_CASE("small samples have more negative critical values", "[unitroot]") {
    const auto small = tsa::adf_critical_values(25);
    const auto large = tsa::adf_critical_values(3000);
    CHECK(small.pct1 < large.pct1);
    CHECK(small.pct5 < large.pct5);
    CHECK(small.pct10 < large.pct10);
}

TEST_CASE("interpolated values stay between the table entries", "[unitroot]") {
    const auto at100 = tsa::adf_critical_values(100);
    const auto at250 = tsa::adf_critical_values(250);
    // midpoint in 1/n between 100 and 250
    const std::size_t mid = static_cast<std::size_t>(1.0 / (0.5 * (1.0 / 100 + 1.0 / 250)));
    const auto at_mid = tsa::adf_critical_values(mid);
    CHECK(at_mid.pct1 > at100.pct1);
    CHECK(at_mid.pct1 < at250.pct1);
    CHECK(at_mid.pct5 > at100.pct5);
    CHECK(at_mid.pct5 < at250.pct5);
}

TEST_CASE("critical values refuse tiny samples", "[unitroot]") {
    REQUIRE_THROWS_AS(tsa::adf_critical_values(19), std::invalid_argument);
}

TEST_CASE("a random walk is not rejected but its difference is", "[unitroot]") {
    const auto walk = random_walk(2024, 2000);
    const auto res = tsa::adf_test(walk);
    CHECK(res.statistic > res.critical_values.pct5);
    CHECK_FALSE(res.reject_unit_root_at_5pct);

    std::vector<double> diff(walk.size() - 1);
    for (std::size_t i = 1; i < walk.size(); ++i) diff[i - 1] = walk[i] - walk[i - 1];
    const auto res_diff = tsa::adf_test(diff);
    CHECK(res_diff.statistic < res_diff.critical_values.pct1);
    CHECK(res_diff.reject_unit_root_at_5pct);
    CHECK(res_diff.p_bracket == "p < 0.01");
}

TEST_CASE("a stationary AR(1) rejects the unit root", "[unitroot]") {
    tsa::NormalRng rng(55);
    tsa::ArmaSimSpec spec;
    spec.phi = {0.5};
    const auto x = tsa::simulate_arma(spec, 2000, rng);
    const auto res = tsa::adf_test(x);
    CHECK(res.reject_unit_root_at_5pct);
}

TEST_CASE("decision flag always mirrors the 5pct comparison", "[unitroot]") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u, 6u}) {
        const auto x = random_walk(seed, 400);
        const auto res = tsa::adf_test(x);
        CHECK(res.reject_unit_root_at_5pct == (res.statistic < res.critical_values.pct5));
    }
}

TEST_CASE("the statistic is shift and scale invariant", "[unitroot]") {
    const auto x = random_walk(99, 500);
    const auto base = tsa::adf_test(x);

    std::vector<double> shifted(x), scaled(x);
    for (auto& v : shifted) v += 1234.5;
    for (auto& v : scaled) v *= 37.25;
    const auto s1 = tsa::adf_test(shifted);
    const auto s2 = tsa::adf_test(scaled);
    CHECK_THAT(s1.statistic, WithinAbs(base.statistic, 1e-8));
    CHECK_THAT(s2.statistic, WithinAbs(base.statistic, 1e-8));
    CHECK(s1.lags_used == base.lags_used);
    CHECK(s2.lags_used == base.lags_used);
}

TEST_CASE("fixed-lag mode uses exactly the requested augmentation", "[unitroot]") {
    const auto x = random_walk(7, 300);
    const auto res = tsa::adf_test(x, 4, tsa::LagSelection::fixed);
    CHECK(res.lags_used == 4);
    CHECK(res.n_effective == 300 - 1 - 4);
}

TEST_CASE("constant series is refused", "[unitroot]") {
    REQUIRE_THROWS_AS(tsa::adf_test(std::vector<double>(100, 2.5)), tsa::DataError);
}

TEST_CASE("test size stays near the nominal 5 percent level", "[unitroot]") {
    int rejections = 0;
    const int reps = 500;
    for (int rep = 0; rep < reps; ++rep) {
        const auto walk = random_walk(10000 + static_cast<std::uint64_t>(rep), 500);
        if (tsa::adf_test(walk).reject_unit_root_at_5pct) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / reps;
    CHECK(rate >= 0.02);
    CHECK(rate <= 0.08);
}
