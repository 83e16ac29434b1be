#pragma once

#include "adriana/rng.hpp"
#include "adriana/seir.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace adriana {

enum class AgeGroup { Age0to19, Age20to39, Age40to59, Age60plus };
enum class Severity { Mild, Severe, Critical };
enum class Outcome { Recovered, Died };

struct Patient {
    std::int64_t id = 0;
    double arrival_time = 0.0;  // days
    AgeGroup age_group = AgeGroup::Age20to39;
    Severity severity = Severity::Mild;
    double treatment_duration = 1.0;  // days
    Outcome outcome = Outcome::Recovered;
};

struct DesConfig {
    std::size_t bed_capacity = 100;
    std::array<double, 3> severity_probabilities{0.7, 0.2, 0.1};   // mild, severe, critical
    std::array<double, 4> age_probabilities{0.3, 0.3, 0.25, 0.15};
    std::array<double, 3> duration_mean{5.0, 10.0, 14.0};          // days, per severity
    std::array<double, 3> duration_spread{2.0, 4.0, 6.0};          // std dev, per severity
    std::array<std::array<double, 4>, 3> death_probability{{
        {0.001, 0.002, 0.01, 0.04},
        {0.01, 0.02, 0.08, 0.2},
        {0.1, 0.15, 0.3, 0.5},
    }};
    std::uint64_t seed = 1;

    void validate() const;
};

struct DesReport {
    std::int64_t admitted = 0;  // arrivals that entered the system
    std::int64_t recovered = 0;
    std::int64_t died = 0;
    std::int64_t still_in_treatment = 0;
    std::int64_t still_waiting = 0;
    std::vector<std::int64_t> occupancy;     // beds in use, sampled at each day
    std::vector<std::int64_t> queue_length;  // waiting patients, sampled at each day
    std::size_t peak_day = 0;
    std::int64_t peak_occupancy = 0;
};

/// Draws one patient's traits from the configured distributions.
Patient sample_patient(Rng& rng, const DesConfig& config, double arrival_time);

/// Admission times derived from the SEIR exposed->infectious flow:
/// day d contributes Poisson(admission_fraction * sigma * e(d)) arrivals,
/// each placed uniformly within the day. Result is sorted.
std::vector<double> arrivals_from_seir(const SeirTrajectory& trajectory, double sigma,
                                       double admission_fraction, std::uint64_t seed);

/// Seeded event-loop simulation; arrivals must be sorted ascending.
DesReport run(const DesConfig& config, const std::vector<double>& arrivals,
              std::size_t horizon_days);

/// Earliest day of maximum bed occupancy.
std::pair<std::size_t, std::int64_t> peak_demand(const DesReport& report);

} // namespace adriana
