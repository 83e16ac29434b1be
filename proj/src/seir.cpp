#include "adriana/seir.hpp"

#include "adriana/error.hpp"

#include <cmath>

namespace adriana {

SeirDerivatives derivatives(const SeirState& state, const SeirParams& params) {
    const double infection = params.beta * state.s * state.i / params.population;
    SeirDerivatives d;
    d.ds = -infection;
    d.de = infection - params.sigma * state.e;
    d.di = params.sigma * state.e - params.gamma * state.i;
    d.dr = params.gamma * state.i;
    return d;
}

SeirState euler_step(const SeirState& state, const SeirParams& params, double* clamp_deficit) {
    const SeirDerivatives d = derivatives(state, params);
    SeirState next;
    next.s = state.s + params.dt * d.ds;
    next.e = state.e + params.dt * d.de;
    next.i = state.i + params.dt * d.di;
    next.r = state.r + params.dt * d.dr;
    next.t = state.t + params.dt;
    if (!std::isfinite(next.total()))
        throw Error(ErrorCode::StepProducedNaN, "non-finite state at t=" + std::to_string(next.t));
    for (double* c : {&next.s, &next.e, &next.i, &next.r}) {
        if (*c < 0.0) {
            if (clamp_deficit) *clamp_deficit += -*c;
            *c = 0.0;
        }
    }
    return next;
}

SeirTrajectory simulate(const SeirState& initial, const SeirParams& params,
                        std::size_t horizon_days) {
    if (horizon_days == 0) throw Error(ErrorCode::InvalidConfig, "horizon must be >= 1");
    if (!(params.dt > 0.0 && params.dt <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "dt must lie in (0, 1]");
    const auto steps_per_day = static_cast<std::size_t>(std::llround(1.0 / params.dt));
    // dt sets the sampling cadence; each step is refined into substeps of
    // at most 0.05 days so coarse cadences stay on the converged trajectory
    const auto substeps =
        static_cast<std::size_t>(std::ceil(params.dt / 0.05 - 1e-12));
    SeirParams fine = params;
    fine.dt = params.dt / static_cast<double>(substeps);
    SeirTrajectory trajectory;
    trajectory.daily.reserve(horizon_days + 1);
    SeirState state = initial;
    trajectory.daily.push_back(state);
    for (std::size_t day = 0; day < horizon_days; ++day) {
        for (std::size_t k = 0; k < steps_per_day * substeps; ++k)
            state = euler_step(state, fine, &trajectory.clamp_deficit);
        trajectory.daily.push_back(state);
    }
    return trajectory;
}

double r0(const SeirParams& params) {
    if (params.gamma <= 0.0) throw Error(ErrorCode::ZeroGamma, "gamma must be positive");
    return params.beta / params.gamma;
}

} // namespace adriana
