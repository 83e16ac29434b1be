#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace adriana {

struct SeirParams {
    double beta = 0.5;    // transmission rate per day
    double sigma = 0.2;   // incubation rate per day (1/sigma = incubation period)
    double gamma = 0.1;   // recovery rate per day
    double population = 1e6;
    double dt = 1.0;      // step size in days, (0, 1]
};

struct SeirState {
    double s = 0.0;
    double e = 0.0;
    double i = 0.0;
    double r = 0.0;
    double t = 0.0;  // days

    double total() const { return s + e + i + r; }
};

struct SeirTrajectory {
    std::vector<SeirState> daily;  // sampled at t = 0, 1, 2, ...
    /// Total mass clamped away from negative compartments, per step.
    double clamp_deficit = 0.0;
};

struct SeirDerivatives {
    double ds = 0.0;
    double de = 0.0;
    double di = 0.0;
    double dr = 0.0;
};

SeirDerivatives derivatives(const SeirState& state, const SeirParams& params);

/// One explicit Euler step of size params.dt; negative compartments are
/// clamped to zero with the deficit accumulated into *clamp_deficit.
SeirState euler_step(const SeirState& state, const SeirParams& params,
                     double* clamp_deficit = nullptr);

SeirTrajectory simulate(const SeirState& initial, const SeirParams& params,
                        std::size_t horizon_days);

/// Basic reproduction number beta/gamma. Requires gamma > 0.
double r0(const SeirParams& params);

} // namespace adriana
