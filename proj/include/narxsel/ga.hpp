#ifndef NARXSEL_GA_HPP
#define NARXSEL_GA_HPP

/** @file
 * Generational binary genetic algorithm used as the baseline optimizer.
 */

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "random.hpp"
#include "search.hpp"
#include "structure.hpp"

namespace narxsel
{

struct GAConfig
{
    std::size_t population = 80;
    double p_c = 0.45;
    double p_m = 0.01;
    std::size_t budget = 6000;
    std::size_t elitism = 2;

    void validate() const
    {
        if (population < 2)
            throw std::invalid_argument("population must hold at least 2 individuals");
        if (!(0.0 <= p_c && p_c <= 1.0) || !(0.0 <= p_m && p_m <= 1.0))
            throw std::invalid_argument("crossover and mutation rates must lie in [0, 1]");
        if (elitism >= population)
            throw std::invalid_argument("elitism must be smaller than the population");
        if (budget < population)
            throw std::invalid_argument("budget must cover the initial population");
    }

    /// Generations including the initial population.
    [[nodiscard]] std::size_t generations() const { return budget / population; }
};

struct Individual
{
    Structure genome;
    double fitness;
};

/// Indices sorted best first; ties keep population order.
inline std::vector<std::size_t> fitness_ranking(const std::vector<Individual>& population)
{
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return population[a].fitness < population[b].fitness;
    });
    return order;
}

/**
 * Rank-proportional roulette: the individual ranked r (1 = best) in a
 * population of N carries weight N - r + 1.
 */
class RankRoulette
{
public:
    explicit RankRoulette(const std::vector<Individual>& population)
        : order_(fitness_ranking(population))
    {
        const auto n = order_.size();
        cumulative_.resize(n);
        std::size_t sum = 0;
        for (std::size_t r = 0; r < n; ++r) {
            sum += n - r;
            cumulative_[r] = sum;
        }
    }

    std::size_t pick(Rng& rng) const
    {
        const auto ticket = rng.index(cumulative_.back());
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), ticket);
        return order_[static_cast<std::size_t>(it - cumulative_.begin())];
    }

    [[nodiscard]] const std::vector<std::size_t>& order() const { return order_; }

private:
    std::vector<std::size_t> order_;
    std::vector<std::size_t> cumulative_;
};

/// Single-point crossover at a cut in 1..n-1, applied with probability p_c.
inline void crossover(Bits& a, Bits& b, double p_c, Rng& rng)
{
    if (a.size() < 2 || !rng.bernoulli(p_c))
        return;
    const auto cut = 1 + static_cast<std::size_t>(rng.index(a.size() - 1));
    std::swap_ranges(a.begin() + static_cast<long>(cut), a.end(), b.begin() + static_cast<long>(cut));
}

/// Per-bit flips; an emptied genome gets one random bit switched back on.
inline Structure mutate(Bits bits, double p_m, Rng& rng)
{
    for (auto& b : bits)
        if (rng.bernoulli(p_m))
            b ^= 1;
    if (Structure::count(bits) == 0)
        bits[static_cast<std::size_t>(rng.index(bits.size()))] = 1;
    return Structure(std::move(bits));
}

/**
 * One GA run: random initial population, rank roulette parent selection,
 * single-point crossover, bit-flip mutation and elitism.  Elites carry their
 * fitness forward; every other offspring costs one evaluation.
 */
template <Objective F>
SearchResult run_ga(F&& objective, std::size_t n_terms, const GAConfig& config, Rng& rng)
{
    config.validate();
    if (n_terms == 0)
        throw std::invalid_argument("dictionary must not be empty");
    EvaluationCounter counter(objective, config.budget);
    std::vector<Individual> population;
    population.reserve(config.population);
    for (std::size_t i = 0; i < config.population; ++i) {
        auto genome = random_structure(n_terms, rng);
        const double f = counter(genome);
        population.push_back({std::move(genome), f});
    }

    for (std::size_t gen = 1; gen < config.generations() && !counter.exhausted(); ++gen) {
        const RankRoulette roulette(population);
        std::vector<Individual> next;
        next.reserve(config.population);
        for (std::size_t e = 0; e < config.elitism; ++e)
            next.push_back(population[roulette.order()[e]]);
        while (next.size() < config.population && !counter.exhausted()) {
            Bits a = population[roulette.pick(rng)].genome.bits();
            Bits b = population[roulette.pick(rng)].genome.bits();
            crossover(a, b, config.p_c, rng);
            for (Bits* child : {&a, &b}) {
                if (next.size() >= config.population || counter.exhausted())
                    break;
                auto genome = mutate(std::move(*child), config.p_m, rng);
                const double f = counter(genome);
                next.push_back({std::move(genome), f});
            }
        }
        if (next.size() < config.population)
            break;
        population = std::move(next);
    }
    return counter.take();
}

} // namespace narxsel

#endif
