#include "adriana/des.hpp"

#include "adriana/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

namespace adriana {

namespace {

struct Event {
    double time = 0.0;
    std::uint64_t sequence = 0;  // tiebreaker for simultaneous events
    enum class Kind { Arrival, TreatmentComplete } kind = Kind::Arrival;
    std::int64_t patient_id = -1;

    bool operator>(const Event& other) const {
        if (time != other.time) return time > other.time;
        return sequence > other.sequence;
    }
};

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::InvalidConfig, std::string(what) + " outside [0,1]");
}

} // namespace

void DesConfig::validate() const {
    if (bed_capacity == 0) throw Error(ErrorCode::InvalidConfig, "bed capacity must be positive");
    double sum = 0.0;
    for (double p : severity_probabilities) {
        check_probability(p, "severity probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidConfig, "severity probabilities must sum to 1");
    sum = 0.0;
    for (double p : age_probabilities) {
        check_probability(p, "age probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidConfig, "age probabilities must sum to 1");
    for (const auto& row : death_probability)
        for (double p : row) check_probability(p, "death probability");
    for (double m : duration_mean)
        if (!(m > 0.0)) throw Error(ErrorCode::InvalidConfig, "duration mean must be positive");
    for (double s : duration_spread)
        if (!(s >= 0.0)) throw Error(ErrorCode::InvalidConfig, "duration spread must be >= 0");
}

Patient sample_patient(Rng& rng, const DesConfig& config, double arrival_time) {
    Patient patient;
    patient.arrival_time = arrival_time;
    patient.severity =
        static_cast<Severity>(rng.categorical(config.severity_probabilities));
    patient.age_group = static_cast<AgeGroup>(rng.categorical(config.age_probabilities));
    const auto s = static_cast<std::size_t>(patient.severity);
    const double mean = config.duration_mean[s];
    const double spread = config.duration_spread[s];
    if (spread <= 0.0) {
        patient.treatment_duration = mean;
    } else {
        const double variance_ratio = (spread / mean) * (spread / mean);
        const double sigma_log = std::sqrt(std::log1p(variance_ratio));
        const double mu_log = std::log(mean) - 0.5 * sigma_log * sigma_log;
        patient.treatment_duration = rng.lognormal(mu_log, sigma_log);
    }
    const double p_death =
        config.death_probability[s][static_cast<std::size_t>(patient.age_group)];
    patient.outcome = rng.uniform01() < p_death ? Outcome::Died : Outcome::Recovered;
    return patient;
}

std::vector<double> arrivals_from_seir(const SeirTrajectory& trajectory, double sigma,
                                       double admission_fraction, std::uint64_t seed) {
    if (trajectory.daily.empty())
        throw Error(ErrorCode::InvalidConfig, "empty trajectory");
    if (!(admission_fraction >= 0.0 && admission_fraction <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "admission fraction outside [0,1]");
    Rng rng(seed);
    std::vector<double> arrivals;
    if (admission_fraction == 0.0) return arrivals;
    for (std::size_t day = 0; day < trajectory.daily.size(); ++day) {
        const double flow = sigma * trajectory.daily[day].e;  // new infections per day
        const double mean = admission_fraction * flow;
        const std::uint64_t count = rng.poisson(mean);
        for (std::uint64_t k = 0; k < count; ++k)
            arrivals.push_back(static_cast<double>(day) + rng.uniform01());
    }
    std::sort(arrivals.begin(), arrivals.end());
    return arrivals;
}

DesReport run(const DesConfig& config, const std::vector<double>& arrivals,
              std::size_t horizon_days) {
    config.validate();
    if (!std::is_sorted(arrivals.begin(), arrivals.end()))
        throw Error(ErrorCode::UnsortedArrivals, "arrival times must be ascending");

    Rng rng(config.seed);
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
    std::uint64_t sequence = 0;
    for (double t : arrivals) {
        if (t >= static_cast<double>(horizon_days)) break;
        events.push(Event{t, sequence++, Event::Kind::Arrival, -1});
    }

    std::vector<Patient> patients;
    std::deque<std::int64_t> waiting;  // FIFO by patient id
    std::size_t beds_in_use = 0;
    DesReport report;
    report.occupancy.assign(horizon_days, 0);
    report.queue_length.assign(horizon_days, 0);
    std::size_t next_sample_day = 0;

    auto sample_until = [&](double time) {
        while (next_sample_day < horizon_days &&
               static_cast<double>(next_sample_day) < time) {
            report.occupancy[next_sample_day] = static_cast<std::int64_t>(beds_in_use);
            report.queue_length[next_sample_day] = static_cast<std::int64_t>(waiting.size());
            ++next_sample_day;
        }
    };

    auto start_treatment = [&](std::int64_t id, double now) {
        ++beds_in_use;
        events.push(Event{now + patients[static_cast<std::size_t>(id)].treatment_duration,
                          sequence++, Event::Kind::TreatmentComplete, id});
    };

    while (!events.empty()) {
        const Event event = events.top();
        events.pop();
        if (event.time >= static_cast<double>(horizon_days)) break;
        sample_until(event.time);
        switch (event.kind) {
        case Event::Kind::Arrival: {
            const auto id = static_cast<std::int64_t>(patients.size());
            Patient patient = sample_patient(rng, config, event.time);
            patient.id = id;
            patients.push_back(patient);
            ++report.admitted;
            if (beds_in_use < config.bed_capacity)
                start_treatment(id, event.time);
            else
                waiting.push_back(id);
            break;
        }
        case Event::Kind::TreatmentComplete: {
            --beds_in_use;
            const Patient& patient = patients[static_cast<std::size_t>(event.patient_id)];
            if (patient.outcome == Outcome::Died)
                ++report.died;
            else
                ++report.recovered;
            if (!waiting.empty()) {
                const std::int64_t next_id = waiting.front();
                waiting.pop_front();
                start_treatment(next_id, event.time);
            }
            break;
        }
        }
    }
    sample_until(static_cast<double>(horizon_days));

    report.still_in_treatment = static_cast<std::int64_t>(beds_in_use);
    report.still_waiting = static_cast<std::int64_t>(waiting.size());
    const auto [day, occ] = peak_demand(report);
    report.peak_day = day;
    report.peak_occupancy = occ;
    return report;
}

std::pair<std::size_t, std::int64_t> peak_demand(const DesReport& report) {
    std::size_t best_day = 0;
    std::int64_t best = 0;
    for (std::size_t d = 0; d < report.occupancy.size(); ++d)
        if (report.occupancy[d] > best) {
            best = report.occupancy[d];
            best_day = d;
        }
    return {best_day, best};
}

} // namespace adriana
