#include "adriana/des.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace adriana;
using testutil::throws_code;

namespace {

DesConfig deterministic_config() {
    // spread 0 makes treatment duration exactly the mean
    DesConfig config;
    config.bed_capacity = 1;
    config.severity_probabilities = {1.0, 0.0, 0.0};
    config.duration_mean = {3.0, 3.0, 3.0};
    config.duration_spread = {0.0, 0.0, 0.0};
    for (auto& row : config.death_probability) row.fill(0.0);
    return config;
}

std::string report_bytes(const DesReport& report) {
    std::string out;
    out += std::to_string(report.admitted) + "|" + std::to_string(report.recovered) + "|" +
           std::to_string(report.died) + "|" + std::to_string(report.still_in_treatment) +
           "|" + std::to_string(report.still_waiting) + "|" +
           std::to_string(report.peak_day) + "|" + std::to_string(report.peak_occupancy);
    for (auto v : report.occupancy) out += "," + std::to_string(v);
    for (auto v : report.queue_length) out += ";" + std::to_string(v);
    return out;
}

SeirTrajectory constant_exposed(double e, std::size_t days) {
    SeirTrajectory trajectory;
    for (std::size_t day = 0; day <= days; ++day) {
        SeirState state;
        state.e = e;
        state.t = static_cast<double>(day);
        trajectory.daily.push_back(state);
    }
    return trajectory;
}

} // namespace

TEST_CASE("arrivals_from_seir edge cases") {
    const auto trajectory = constant_exposed(500.0, 30);
    CHECK(arrivals_from_seir(trajectory, 0.2, 0.0, 1).empty());
    CHECK(arrivals_from_seir(constant_exposed(0.0, 30), 0.2, 0.5, 1).empty());
}

TEST_CASE("arrivals are sorted and concentrate around the expected count") {
    const double sigma = 0.2;
    const double fraction = 0.1;
    const auto trajectory = constant_exposed(500.0, 100);
    const auto arrivals = arrivals_from_seir(trajectory, sigma, fraction, 17);

    CHECK(std::is_sorted(arrivals.begin(), arrivals.end()));
    // 100 days x Poisson(0.1 * 0.2 * 500 = 10): mean 1000, sd sqrt(1000)
    const double expected = 1000.0;
    CHECK(std::abs(static_cast<double>(arrivals.size()) - expected) <
          3.0 * std::sqrt(expected));
}

TEST_CASE("single patient occupies one bed for its whole stay") {
    const auto report = run(deterministic_config(), {0.0}, 10);
    REQUIRE(report.occupancy.size() == 10);
    CHECK(report.occupancy[0] == 1);
    CHECK(report.occupancy[1] == 1);
    CHECK(report.occupancy[2] == 1);
    CHECK(report.occupancy[3] == 0);
    CHECK(report.admitted == 1);
    CHECK(report.recovered == 1);
    CHECK(peak_demand(report) == std::pair<std::size_t, std::int64_t>{0, 1});
}

TEST_CASE("second simultaneous arrival waits for the bed") {
    const auto report = run(deterministic_config(), {0.0, 0.0}, 10);
    CHECK(report.admitted == 2);
    CHECK(report.recovered == 2);
    CHECK(report.queue_length[0] == 1);
    CHECK(report.queue_length[3] == 0);
    // occupancy stays 1 while the queue drains: stays [0,3) and [3,6)
    for (std::size_t day = 0; day < 6; ++day) CHECK(report.occupancy[day] == 1);
    CHECK(report.occupancy[6] == 0);
}

TEST_CASE("no arrivals means an all-zero report") {
    const auto report = run(DesConfig{}, {}, 5);
    CHECK(report.admitted == 0);
    CHECK(report.peak_occupancy == 0);
    CHECK(std::all_of(report.occupancy.begin(), report.occupancy.end(),
                      [](std::int64_t v) { return v == 0; }));
}

TEST_CASE("unsorted arrivals are rejected") {
    CHECK(throws_code(ErrorCode::UnsortedArrivals,
                      [] { run(DesConfig{}, {2.0, 1.0}, 5); }));
}

TEST_CASE("sample_patient honors the configured distributions") {
    DesConfig config;
    config.severity_probabilities = {1.0, 0.0, 0.0};
    for (auto& row : config.death_probability) row.fill(0.0);

    Rng rng(3);
    for (std::size_t i = 0; i < 200; ++i) {
        const auto patient = sample_patient(rng, config, 0.0);
        CHECK(patient.severity == Severity::Mild);
        CHECK(patient.outcome == Outcome::Recovered);
        CHECK(patient.treatment_duration > 0.0);
    }
}

TEST_CASE("severity frequencies match their probabilities") {
    DesConfig config;
    Rng rng(9);
    std::size_t mild = 0;
    const std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i) {
        if (sample_patient(rng, config, 0.0).severity == Severity::Mild) ++mild;
    }
    CHECK(static_cast<double>(mild) / n == doctest::Approx(0.7).epsilon(0.03));
}

TEST_CASE("peak_demand picks the earliest maximum") {
    DesReport report;
    report.occupancy = {0, 3, 3, 1};
    CHECK(peak_demand(report) == std::pair<std::size_t, std::int64_t>{1, 3});

    report.occupancy = {0, 0, 0};
    CHECK(peak_demand(report) == std::pair<std::size_t, std::int64_t>{0, 0});
}

TEST_CASE("identical configs reproduce byte-identical reports") {
    DesConfig config;
    config.bed_capacity = 5;
    config.seed = 77;
    std::vector<double> arrivals;
    for (std::size_t i = 0; i < 200; ++i) arrivals.push_back(i * 0.3);

    const auto a = run(config, arrivals, 90);
    const auto b = run(config, arrivals, 90);
    CHECK(report_bytes(a) == report_bytes(b));
}

TEST_CASE("patients are conserved and capacity is never exceeded") {
    Rng rng(31);
    for (std::size_t trial = 0; trial < 100; ++trial) {
        DesConfig config;
        config.bed_capacity = 1 + rng.uniform_int(30);
        config.seed = rng.next_u64();
        const std::size_t n_arrivals = rng.uniform_int(300);
        std::vector<double> arrivals;
        double t = 0.0;
        for (std::size_t i = 0; i < n_arrivals; ++i) {
            t += rng.uniform(0.0, 0.5);
            arrivals.push_back(t);
        }
        const std::size_t horizon = 40 + rng.uniform_int(60);

        const auto report = run(config, arrivals, horizon);
        const auto in_horizon = std::count_if(
            arrivals.begin(), arrivals.end(),
            [&](double at) { return at < static_cast<double>(horizon); });
        CHECK(report.admitted == static_cast<std::int64_t>(in_horizon));
        CHECK(report.admitted == report.recovered + report.died +
                                     report.still_in_treatment + report.still_waiting);
        for (auto beds : report.occupancy)
            CHECK(beds <= static_cast<std::int64_t>(config.bed_capacity));
        CHECK(report.peak_occupancy <= static_cast<std::int64_t>(config.bed_capacity));
    }
}

TEST_CASE("doubling the load cannot lower the peak") {
    DesConfig config;
    config.bed_capacity = 10000;
    config.seed = 5;
    std::vector<double> light, heavy;
    for (std::size_t i = 0; i < 100; ++i) light.push_back(i * 0.7);
    for (double t : light) {
        heavy.push_back(t);
        heavy.push_back(t + 0.01);
    }
    std::sort(heavy.begin(), heavy.end());

    const auto a = run(config, light, 120);
    const auto b = run(config, heavy, 120);
    CHECK(b.peak_occupancy >= a.peak_occupancy);
}

TEST_CASE("invalid configs are rejected") {
    DesConfig config;
    config.severity_probabilities = {0.5, 0.2, 0.1};  // does not sum to one
    CHECK(throws_code(ErrorCode::InvalidConfig, [&] { config.validate(); }));

    DesConfig negative;
    negative.duration_mean[0] = -1.0;
    CHECK(throws_code(ErrorCode::InvalidConfig, [&] { negative.validate(); }));
}
