#include "adriana/stationarity.hpp"

#include "adriana/data_ingest.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace adriana;
using testutil::throws_code;

namespace {

std::vector<double> country_cumulative(const char* file, const char* country) {
    const auto parsed = parse_jhu_csv(testutil::read_file(testutil::fixture_path(file)));
    const auto selected = select_country(parsed, country);
    return std::vector<double>(selected.values.begin(), selected.values.end());
}

std::vector<double> country_daily(const char* file, const char* country, SeriesKind kind) {
    const auto parsed = parse_jhu_csv(testutil::read_file(testutil::fixture_path(file)));
    return to_daily(select_country(parsed, country), kind).series.values;
}

} // namespace

TEST_CASE("difference examples") {
    const std::vector<double> series{2.0, 5.0, 9.0};
    const auto d1 = difference(series, 1);
    CHECK(d1.values == std::vector<double>{3.0, 4.0});
    CHECK(d1.seeds == std::vector<double>{2.0});

    const auto d2 = difference(series, 2);
    CHECK(d2.values == std::vector<double>{1.0});
    CHECK(d2.seeds == std::vector<double>{2.0, 3.0});

    CHECK(throws_code(ErrorCode::SeriesTooShort, [&] { difference(series, 3); }));
}

TEST_CASE("undifference inverts difference exactly") {
    testutil::Lcg lcg(11);
    for (std::size_t trial = 0; trial < 50; ++trial) {
        std::vector<double> series(20);
        for (auto& v : series) v = lcg.uniform() * 100.0 - 50.0;
        for (std::size_t d = 1; d <= 3; ++d) {
            const auto diffed = difference(series, d);
            const auto restored = undifference(diffed.values, diffed.seeds);
            REQUIRE(restored.size() == series.size());
            for (std::size_t i = 0; i < series.size(); ++i)
                CHECK(std::abs(restored[i] - series[i]) <= 1e-9);
        }
    }
    CHECK(throws_code(ErrorCode::MissingSeeds,
                      [] { undifference(std::vector<double>{1.0}, std::vector<double>{}); }));
}

TEST_CASE("acf basics") {
    const auto noise = testutil::lcg_normals(3, 365);
    const auto result = acf(noise, 10);
    CHECK(result.values[0] == 1.0);
    CHECK(result.confidence_half_width == doctest::Approx(1.96 / std::sqrt(365.0)));
    CHECK(result.confidence_half_width == doctest::Approx(0.1026).epsilon(1e-3));
    for (double v : result.values) CHECK(std::abs(v) <= 1.0 + 1e-12);

    CHECK(throws_code(ErrorCode::ConstantSeries,
                      [] { acf(std::vector<double>(30, 4.0), 5); }));
}

TEST_CASE("acf recovers AR(1) autocorrelation") {
    const auto series = testutil::ar1(0.8, 5000, 7);
    const auto result = acf(series, 5);
    CHECK(result.values[1] == doctest::Approx(0.8).epsilon(0.04));
    CHECK(result.values[2] == doctest::Approx(0.64).epsilon(0.08));
}

TEST_CASE("pacf matches acf at lag one and cuts off for AR(1)") {
    const auto series = testutil::ar1(0.8, 5000, 13);
    const auto correlations = acf(series, 6);
    const auto partials = pacf(series, 6);
    CHECK(partials[0] == 1.0);
    CHECK(partials[1] == doctest::Approx(correlations.values[1]).epsilon(1e-10));
    for (std::size_t lag = 2; lag <= 6; ++lag)
        CHECK(std::abs(partials[lag]) < 0.05);
}

TEST_CASE("confirmed daily series is strongly autocorrelated at lag one") {
    const auto daily = country_daily("time_series_covid19_confirmed_global.csv",
                                     "South Africa", SeriesKind::Confirmed);
    CHECK(pacf(daily, 1)[1] == doctest::Approx(0.967).epsilon(0.021));
}

TEST_CASE("adf on synthetic oracle sequences") {
    // Frozen from tests/oracle/adf_oracle.py (statsmodels adfuller).
    const auto white = testutil::lcg_normals(42, 500);
    REQUIRE(white[0] == doctest::Approx(0.19901748).epsilon(1e-6));
    const auto white_result = adf_test(white);
    CHECK(white_result.statistic == doctest::Approx(-21.85208419).epsilon(1e-6));
    CHECK(white_result.p_value < 0.01);
    CHECK(white_result.lags_used == 0);
    CHECK(white_result.reject_unit_root_at_5pct);

    const auto walk = testutil::random_walk(5, 500);
    REQUIRE(walk[0] == doctest::Approx(1.14723783).epsilon(1e-6));
    const auto walk_result = adf_test(walk);
    CHECK(walk_result.statistic == doctest::Approx(-1.75978428).epsilon(1e-6));
    CHECK(walk_result.p_value == doctest::Approx(0.40060243).epsilon(1e-6));
    CHECK(walk_result.p_value > 0.3);
    CHECK(walk_result.lags_used == 0);
    CHECK_FALSE(walk_result.reject_unit_root_at_5pct);
}

TEST_CASE("adf matches the statsmodels oracle on the fixtures") {
    struct Anchor {
        const char* file;
        double statistic;
        double p_value;
        std::size_t lags;
    };
    const Anchor anchors[] = {
        {"time_series_covid19_confirmed_global.csv", -2.842450869, 0.05246114233, 13},
        {"time_series_covid19_recovered_global.csv", 1.206060892, 0.9960274918, 18},
        {"time_series_covid19_deaths_global.csv", 0.5193880105, 0.9854506175, 18},
    };
    for (const auto& anchor : anchors) {
        const auto series = country_cumulative(anchor.file, "South Africa");
        const auto result = adf_test(series);
        CHECK(result.statistic == doctest::Approx(anchor.statistic).epsilon(1e-7));
        CHECK(result.p_value == doctest::Approx(anchor.p_value).epsilon(1e-7));
        CHECK(result.lags_used == anchor.lags);
    }
}

TEST_CASE("adf matches the statsmodels oracle on the daily fixtures") {
    struct Anchor {
        const char* file;
        SeriesKind kind;
        double statistic;
        double p_value;
        std::size_t lags;
    };
    const Anchor anchors[] = {
        {"time_series_covid19_confirmed_global.csv", SeriesKind::Confirmed,
         -2.327826352, 0.1631503914, 18},
        {"time_series_covid19_recovered_global.csv", SeriesKind::Recovered,
         -4.558437033, 0.0001539776074, 17},
        {"time_series_covid19_deaths_global.csv", SeriesKind::Death,
         -3.595100693, 0.005855385725, 18},
    };
    for (const auto& anchor : anchors) {
        const auto daily = country_daily(anchor.file, "South Africa", anchor.kind);
        const auto result = adf_test(daily);
        CHECK(result.statistic == doctest::Approx(anchor.statistic).epsilon(1e-7));
        CHECK(result.p_value == doctest::Approx(anchor.p_value).epsilon(1e-7));
        CHECK(result.lags_used == anchor.lags);
    }
}

TEST_CASE("adf is shift invariant") {
    const auto series = testutil::random_walk(21, 300);
    std::vector<double> shifted(series);
    for (auto& v : shifted) v += 1000.0;
    const auto a = adf_test(series);
    const auto b = adf_test(shifted);
    CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-8));
    CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-8));
}

TEST_CASE("adf input validation") {
    CHECK(throws_code(ErrorCode::SeriesTooShort,
                      [] { adf_test(std::vector<double>{1, 2, 3, 4, 5}); }));
    CHECK(throws_code(ErrorCode::ConstantSeries,
                      [] { adf_test(std::vector<double>(50, 2.0)); }));
}

TEST_CASE("minmax scaling") {
    const std::vector<double> series{0.0, 5.0, 10.0};
    const auto params = minmax_fit(series);
    CHECK(params.min == 0.0);
    CHECK(params.max == 10.0);
    CHECK(minmax_apply(series, params) == std::vector<double>{0.0, 0.5, 1.0});

    const auto extrapolated = minmax_apply(std::vector<double>{12.0}, params);
    CHECK(extrapolated[0] == doctest::Approx(1.2));
    CHECK(minmax_invert(extrapolated, params)[0] == doctest::Approx(12.0));

    CHECK(throws_code(ErrorCode::DegenerateRange,
                      [] { minmax_fit(std::vector<double>(5, 3.0)); }));
}

TEST_CASE("make_windows slides over the series") {
    const auto dataset = make_windows(std::vector<double>{1, 2, 3, 4}, 2);
    REQUIRE(dataset.size() == 2);
    CHECK(dataset.window_size == 2);
    CHECK(dataset.inputs[0] == std::vector<double>{1, 2});
    CHECK(dataset.targets[0] == 3.0);
    CHECK(dataset.inputs[1] == std::vector<double>{2, 3});
    CHECK(dataset.targets[1] == 4.0);

    std::vector<double> long_series(458);
    for (std::size_t i = 0; i < long_series.size(); ++i)
        long_series[i] = static_cast<double>(i);
    CHECK(make_windows(long_series, 9).size() == 449);

    CHECK(throws_code(ErrorCode::SeriesTooShort,
                      [] { make_windows(std::vector<double>{1, 2}, 2); }));
}

TEST_CASE("chrono_split keeps order") {
    std::vector<double> series(12);
    for (std::size_t i = 0; i < series.size(); ++i) series[i] = static_cast<double>(i);
    const auto dataset = make_windows(series, 2);
    REQUIRE(dataset.size() == 10);

    const auto [train, test] = chrono_split(dataset, 0.7);
    CHECK(train.size() == 7);
    CHECK(test.size() == 3);
    CHECK(train.targets.back() < test.targets.front());

    std::vector<double> fixture_like(458);
    for (std::size_t i = 0; i < fixture_like.size(); ++i)
        fixture_like[i] = static_cast<double>(i % 97);
    const auto [big_train, big_test] = chrono_split(make_windows(fixture_like, 9), 0.7);
    CHECK(big_train.size() == 314);
    CHECK(big_test.size() == 135);

    CHECK(throws_code(ErrorCode::EmptyPartition, [&] { chrono_split(dataset, 0.01); }));
    WindowedDataset pair = make_windows(std::vector<double>{1, 2, 3}, 1);
    CHECK(throws_code(ErrorCode::EmptyPartition, [&] { chrono_split(pair, 0.999); }));
    CHECK(throws_code(ErrorCode::InvalidConfig, [&] { chrono_split(dataset, 1.0); }));
}

TEST_CASE("forward_chain_folds") {
    const auto folds = forward_chain_folds(22, 10);
    REQUIRE(folds.size() == 10);
    for (const auto& fold : folds) {
        CHECK(fold.train_begin == 0);
        CHECK(fold.valid_begin == fold.train_end);
        CHECK(fold.valid_end - fold.valid_begin == 2);
        CHECK(fold.valid_end <= 22);
    }
    for (std::size_t j = 1; j < folds.size(); ++j)
        CHECK(folds[j].train_end > folds[j - 1].train_end);

    CHECK(throws_code(ErrorCode::TooFewSamples, [] { forward_chain_folds(19, 10); }));
}

TEST_CASE("slice extracts a dataset range") {
    const auto dataset = make_windows(std::vector<double>{1, 2, 3, 4, 5, 6}, 2);
    const auto part = slice(dataset, 1, 3);
    CHECK(part.size() == 2);
    CHECK(part.inputs[0] == dataset.inputs[1]);
    CHECK(part.targets[1] == dataset.targets[2]);
}
