#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace adriana {

/// Seedable, portable pseudo-random generator: xoshiro256++ seeded via
/// splitmix64. All distribution sampling is implemented here so that
/// draws are bit-identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 bits of precision.
    double uniform01();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Unbiased uniform integer in [0, n). Requires n > 0.
    std::uint64_t uniform_int(std::uint64_t n);

    /// Standard normal via Box-Muller (pairs cached).
    double normal();
    double normal(double mean, double stddev);

    double lognormal(double log_mean, double log_stddev);

    /// Poisson draw by exponential inter-arrival counting; exact for any
    /// mean (split into chunks to avoid exp() underflow).
    std::uint64_t poisson(double mean);

    /// Index sampled from an (unnormalized) weight vector.
    std::size_t categorical(std::span<const double> weights);

    /// Fisher-Yates shuffle of an index vector.
    void shuffle(std::vector<std::size_t>& indices);

    /// Derive an independent stream, e.g. per fold or per tree.
    Rng split(std::uint64_t stream_id) const;

private:
    std::array<std::uint64_t, 4> state_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
    std::uint64_t seed_origin_;
};

} // namespace adriana
