#include "adriana/ga.hpp"

#include "adriana/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adriana {

void GaConfig::validate() const {
    if (population_size < 2)
        throw Error(ErrorCode::InvalidConfig, "population must hold at least 2 individuals");
    if (gene_length == 0 || gene_length > 62)
        throw Error(ErrorCode::InvalidConfig, "gene length must lie in [1, 62]");
    if (search_space.empty())
        throw Error(ErrorCode::InvalidConfig, "search space has no dimensions");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "crossover rate outside [0,1]");
    if (mutation_rate > 1.0)
        throw Error(ErrorCode::InvalidConfig, "mutation rate above 1");
    if (tournament_size == 0)
        throw Error(ErrorCode::InvalidConfig, "tournament size must be positive");
    for (const auto& dim : search_space)
        if (!(dim.max >= dim.min))
            throw Error(ErrorCode::InvalidConfig, "empty range for '" + dim.name + "'");
}

std::map<std::string, double> decode(const Genome& genome, const GaConfig& config) {
    if (genome.size() != config.genome_length())
        throw Error(ErrorCode::LengthMismatch,
                    "genome length " + std::to_string(genome.size()) + ", expected " +
                        std::to_string(config.genome_length()));
    const double denom =
        static_cast<double>((std::uint64_t{1} << config.gene_length) - 1);
    std::map<std::string, double> out;
    for (std::size_t d = 0; d < config.search_space.size(); ++d) {
        std::uint64_t raw = 0;
        for (std::size_t b = 0; b < config.gene_length; ++b)
            raw = (raw << 1) | (genome.bits[d * config.gene_length + b] ? 1u : 0u);
        const auto& dim = config.search_space[d];
        double value = dim.min + static_cast<double>(raw) * (dim.max - dim.min) / denom;
        if (dim.integer) value = std::round(value);
        out[dim.name] = value;
    }
    return out;
}

std::size_t select(const std::vector<double>& fitnesses, std::size_t tournament_size,
                   Rng& rng) {
    if (fitnesses.empty()) throw Error(ErrorCode::EmptyPartition, "empty population");
    std::size_t best = rng.uniform_int(fitnesses.size());
    for (std::size_t k = 1; k < tournament_size; ++k) {
        const std::size_t challenger = rng.uniform_int(fitnesses.size());
        if (fitnesses[challenger] < fitnesses[best]) best = challenger;
    }
    return best;
}

std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, double crossover_rate,
                                    Rng& rng) {
    if (a.size() != b.size())
        throw Error(ErrorCode::LengthMismatch, "parent genomes differ in length");
    Genome child1 = a;
    Genome child2 = b;
    if (a.size() > 1 && rng.uniform01() < crossover_rate) {
        // cut in [1, n-1] so both sides are non-empty
        const std::size_t cut = 1 + rng.uniform_int(a.size() - 1);
        for (std::size_t i = cut; i < a.size(); ++i) {
            child1.bits[i] = b.bits[i];
            child2.bits[i] = a.bits[i];
        }
    }
    return {std::move(child1), std::move(child2)};
}

Genome mutate(const Genome& genome, double rate, Rng& rng) {
    Genome out = genome;
    for (std::size_t i = 0; i < out.bits.size(); ++i)
        if (rng.uniform01() < rate) out.bits[i] = !out.bits[i];
    return out;
}

GaResult run_ga(const GaConfig& config, const FitnessFunction& fitness) {
    config.validate();
    Rng rng(config.seed);
    const std::size_t genome_length = config.genome_length();
    const double mutation_rate = config.mutation_rate >= 0.0
                                     ? config.mutation_rate
                                     : 1.0 / static_cast<double>(genome_length);

    std::vector<Genome> population(config.population_size);
    for (auto& genome : population) {
        genome.bits.resize(genome_length);
        for (std::size_t i = 0; i < genome_length; ++i)
            genome.bits[i] = rng.uniform01() < 0.5;
    }

    auto evaluate = [&](const Genome& genome) {
        const double value = fitness(decode(genome, config));
        return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
    };

    std::vector<double> fitnesses(config.population_size);
    for (std::size_t i = 0; i < population.size(); ++i) fitnesses[i] = evaluate(population[i]);

    GaResult result;
    auto record = [&] {
        const auto best_it = std::min_element(fitnesses.begin(), fitnesses.end());
        double mean = 0.0;
        for (double f : fitnesses) mean += f;
        mean /= static_cast<double>(fitnesses.size());
        result.history.push_back({*best_it, mean});
        const std::size_t best_idx =
            static_cast<std::size_t>(best_it - fitnesses.begin());
        if (result.history.size() == 1 || *best_it < result.best_fitness) {
            result.best_fitness = *best_it;
            result.best_genome = population[best_idx];
        }
    };
    record();

    for (std::size_t gen = 0; gen < config.generations; ++gen) {
        std::vector<Genome> next;
        next.reserve(config.population_size);
        // elitism: current best survives unchanged
        const std::size_t elite = static_cast<std::size_t>(
            std::min_element(fitnesses.begin(), fitnesses.end()) - fitnesses.begin());
        next.push_back(population[elite]);
        while (next.size() < config.population_size) {
            const Genome& parent1 = population[select(fitnesses, config.tournament_size, rng)];
            const Genome& parent2 = population[select(fitnesses, config.tournament_size, rng)];
            auto [child1, child2] = crossover(parent1, parent2, config.crossover_rate, rng);
            next.push_back(mutate(child1, mutation_rate, rng));
            if (next.size() < config.population_size)
                next.push_back(mutate(child2, mutation_rate, rng));
        }
        population = std::move(next);
        for (std::size_t i = 0; i < population.size(); ++i)
            fitnesses[i] = evaluate(population[i]);
        record();
    }

    result.best_hyperparameters = decode(result.best_genome, config);
    return result;
}

} // namespace adriana
