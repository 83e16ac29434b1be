#include "adriana/seir.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace adriana;
using testutil::throws_code;

TEST_CASE("derivatives at a textbook point") {
    SeirParams params;
    params.beta = 0.5;
    params.sigma = 0.2;
    params.gamma = 0.1;
    params.population = 1000.0;

    SeirState state;
    state.s = 999.0;
    state.e = 0.0;
    state.i = 1.0;
    state.r = 0.0;

    const auto d = derivatives(state, params);
    CHECK(d.ds == doctest::Approx(-0.4995));
    CHECK(d.de == doctest::Approx(0.4995));
    CHECK(d.di == doctest::Approx(-0.1));
    CHECK(d.dr == doctest::Approx(0.1));
    CHECK(std::abs(d.ds + d.de + d.di + d.dr) <= 1e-12 * params.population);
}

TEST_CASE("zero transmission freezes susceptibles") {
    SeirParams params;
    params.beta = 0.0;
    params.population = 1000.0;
    SeirState state{900.0, 50.0, 50.0, 0.0, 0.0};
    const auto d = derivatives(state, params);
    CHECK(d.ds == 0.0);
    CHECK(d.de == doctest::Approx(-params.sigma * state.e));
}

TEST_CASE("euler_step advances one dt") {
    SeirParams params;
    params.beta = 0.5;
    params.sigma = 0.2;
    params.gamma = 0.1;
    params.population = 1000.0;
    params.dt = 1.0;

    SeirState state{999.0, 0.0, 1.0, 0.0, 0.0};
    const auto next = euler_step(state, params);
    CHECK(next.s == doctest::Approx(998.5005));
    CHECK(next.e == doctest::Approx(0.4995));
    CHECK(next.i == doctest::Approx(0.9));
    CHECK(next.r == doctest::Approx(0.1));
    CHECK(next.t == doctest::Approx(1.0));
    CHECK(next.total() == doctest::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("simulation without seed infections stays put") {
    SeirParams params;
    params.population = 1000.0;
    SeirState initial{1000.0, 0.0, 0.0, 0.0, 0.0};
    const auto trajectory = simulate(initial, params, 50);
    REQUIRE(trajectory.daily.size() == 51);
    for (const auto& state : trajectory.daily) {
        CHECK(state.s == doctest::Approx(1000.0));
        CHECK(state.i == 0.0);
    }
}

TEST_CASE("r0 equals beta over gamma") {
    SeirParams params;
    params.beta = 0.5;
    params.gamma = 0.1;
    CHECK(r0(params) == doctest::Approx(5.0));

    params.beta = 0.0;
    CHECK(r0(params) == 0.0);

    params.beta = 0.1;
    params.gamma = 0.1;
    CHECK(r0(params) == doctest::Approx(1.0));

    params.gamma = 0.0;
    CHECK(throws_code(ErrorCode::ZeroGamma, [&] { r0(params); }));
}

TEST_CASE("supercritical epidemic peaks then declines") {
    SeirParams params;
    params.beta = 0.5;
    params.sigma = 0.2;
    params.gamma = 0.1;
    params.population = 1e6;
    params.dt = 0.25;
    SeirState initial{1e6 - 110.0, 100.0, 10.0, 0.0, 0.0};

    const auto trajectory = simulate(initial, params, 400);
    double peak = 0.0;
    std::size_t peak_day = 0;
    for (std::size_t day = 0; day < trajectory.daily.size(); ++day) {
        if (trajectory.daily[day].i > peak) {
            peak = trajectory.daily[day].i;
            peak_day = day;
        }
    }
    CHECK(peak > 0.2 * params.population);
    CHECK(peak_day > 10);
    CHECK(peak_day < 390);
    CHECK(trajectory.daily.back().i < 0.01 * params.population);
    // recovered counts never decrease
    for (std::size_t day = 1; day < trajectory.daily.size(); ++day)
        CHECK(trajectory.daily[day].r >= trajectory.daily[day - 1].r - 1e-9);
}

TEST_CASE("subcritical epidemic never grows past its seed") {
    SeirParams params;
    params.beta = 0.05;
    params.sigma = 0.2;
    params.gamma = 0.1;
    params.population = 1e6;
    SeirState initial{1e6 - 200.0, 100.0, 100.0, 0.0, 0.0};
    const auto trajectory = simulate(initial, params, 365);
    for (const auto& state : trajectory.daily)
        CHECK(state.e + state.i <= 200.0 + 1e-9);
}

TEST_CASE("mass is conserved over long runs") {
    testutil::Lcg lcg(5);
    for (std::size_t trial = 0; trial < 20; ++trial) {
        SeirParams params;
        params.beta = lcg.uniform();
        params.sigma = 0.05 + lcg.uniform() * 0.45;
        params.gamma = 0.05 + lcg.uniform() * 0.45;
        params.population = 1e4 + lcg.uniform() * 1e7;
        params.dt = 0.1 + lcg.uniform() * 0.9;

        const double seed_e = lcg.uniform() * 500.0;
        const double seed_i = lcg.uniform() * 500.0;
        SeirState state{params.population - seed_e - seed_i, seed_e, seed_i, 0.0, 0.0};
        for (std::size_t step = 0; step < 2000; ++step) {
            state = euler_step(state, params);
            CHECK(std::abs(state.total() - params.population) <= 1e-9 * params.population);
        }
    }
}

TEST_CASE("trajectories scale with population") {
    SeirParams small;
    small.beta = 0.4;
    small.sigma = 0.2;
    small.gamma = 0.1;
    small.population = 1e4;
    SeirParams big = small;
    big.population = 1e6;

    SeirState small_init{1e4 - 11.0, 10.0, 1.0, 0.0, 0.0};
    SeirState big_init{1e6 - 1100.0, 1000.0, 100.0, 0.0, 0.0};

    const auto a = simulate(small_init, small, 200);
    const auto b = simulate(big_init, big, 200);
    for (std::size_t day = 0; day < a.daily.size(); ++day) {
        CHECK(a.daily[day].i * 100.0 ==
              doctest::Approx(b.daily[day].i).epsilon(1e-9));
    }
}

TEST_CASE("step size refinement stays within two percent of N") {
    SeirParams coarse;
    coarse.beta = 0.5;
    coarse.sigma = 0.2;
    coarse.gamma = 0.1;
    coarse.population = 1e6;
    coarse.dt = 1.0;
    SeirParams fine = coarse;
    fine.dt = 0.1;

    SeirState initial{1e6 - 110.0, 100.0, 10.0, 0.0, 0.0};
    const auto a = simulate(initial, coarse, 400);
    const auto b = simulate(initial, fine, 400);
    REQUIRE(a.daily.size() == b.daily.size());
    for (std::size_t day = 0; day < a.daily.size(); ++day) {
        CHECK(std::abs(a.daily[day].i - b.daily[day].i) <= 0.02 * coarse.population);
        CHECK(std::abs(a.daily[day].s - b.daily[day].s) <= 0.02 * coarse.population);
    }
}
