#pragma once

#include "adriana/rng.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace adriana {

struct Genome {
    std::vector<bool> bits;

    std::size_t size() const { return bits.size(); }
    bool operator==(const Genome&) const = default;
};

struct SearchDimension {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    bool integer = false;
};

struct GaConfig {
    std::size_t population_size = 10;
    std::size_t generations = 45;
    std::size_t gene_length = 10;
    double crossover_rate = 0.9;
    double mutation_rate = -1.0;  // < 0 -> 1 / genome length
    std::size_t tournament_size = 3;
    std::uint64_t seed = 1;
    std::vector<SearchDimension> search_space;

    std::size_t genome_length() const { return gene_length * search_space.size(); }
    void validate() const;
};

struct GenerationStats {
    double best = 0.0;
    double mean = 0.0;
};

struct GaResult {
    Genome best_genome;
    std::map<std::string, double> best_hyperparameters;
    double best_fitness = 0.0;  // lower is better
    std::vector<GenerationStats> history;
};

/// Each gene_length-bit segment is read big-endian as v in [0, 2^L - 1]
/// and mapped to min + v * (max - min) / (2^L - 1); integer dimensions
/// round to nearest.
std::map<std::string, double> decode(const Genome& genome, const GaConfig& config);

/// Tournament selection, lower fitness wins.
std::size_t select(const std::vector<double>& fitnesses, std::size_t tournament_size,
                   Rng& rng);

/// Single-point crossover at a uniform cut with probability crossover_rate,
/// otherwise clones.
std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, double crossover_rate,
                                    Rng& rng);

/// Independent per-bit flips.
Genome mutate(const Genome& genome, double rate, Rng& rng);

using FitnessFunction = std::function<double(const std::map<std::string, double>&)>;

/// Generational GA with elitism; minimizes the fitness function.
GaResult run_ga(const GaConfig& config, const FitnessFunction& fitness);

} // namespace adriana
