#include "adriana/rng.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace adriana {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}

} // namespace

Rng::Rng(std::uint64_t seed) : seed_origin_(seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    assert(n > 0);
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

double Rng::normal(double mean, double stddev) {
    return mean + stddev * normal();
}

double Rng::lognormal(double log_mean, double log_stddev) {
    return std::exp(normal(log_mean, log_stddev));
}

std::uint64_t Rng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::uint64_t count = 0;
    // Poisson(a + b) = Poisson(a) + Poisson(b); chunking keeps exp(-m) > 0
    while (mean > 500.0) {
        double sum = 0.0;
        std::uint64_t k = 0;
        while (true) {
            double u = 0.0;
            do { u = uniform01(); } while (u <= 0.0);
            sum += -std::log(u);
            if (sum >= 500.0) break;
            ++k;
        }
        count += k;
        mean -= 500.0;
    }
    const double threshold = std::exp(-mean);
    double product = 1.0;
    while (true) {
        product *= uniform01();
        if (product <= threshold) break;
        ++count;
    }
    return count;
}

std::size_t Rng::categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) return i;
    }
    return weights.size() - 1;
}

void Rng::shuffle(std::vector<std::size_t>& indices) {
    for (std::size_t i = indices.size(); i > 1; --i) {
        const std::size_t j = uniform_int(i);
        std::swap(indices[i - 1], indices[j]);
    }
}

Rng Rng::split(std::uint64_t stream_id) const {
    std::uint64_t mix = seed_origin_;
    std::uint64_t a = splitmix64(mix);
    std::uint64_t s = a ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    return Rng(s);
}

} // namespace adriana
