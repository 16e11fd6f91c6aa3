#ifndef NARXSEL_SWARM2D_HPP
#define NARXSEL_SWARM2D_HPP

/** @file
 * Two-dimensional unified particle swarm (2D-UPSO) for structure selection.
 *
 * Each particle's velocity is a 2 x N_t matrix of non-negative selection
 * likelihoods.  Row one (rho) holds the likelihood of each cardinality
 * 1..N_t, row two (sigma) the likelihood of each term.  A new position is
 * built in two stages: a roulette wheel over rho picks the cardinality xi,
 * then the xi terms with the largest sigma are switched on.
 *
 * Velocities learn from binary learning sets of the same shape, one per
 * exemplar (personal best, global best, ring-neighborhood best and the
 * particle itself), and the global and local variants are blended by the
 * unification factor u, which rises linearly over the run.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "random.hpp"
#include "search.hpp"
#include "structure.hpp"

namespace narxsel
{

struct SwarmConfig
{
    std::size_t ps = 30;
    double omega = 0.729;
    double c1 = 1.49;
    double c2 = 1.49;
    double u0 = 0.2;
    double uf = 0.7;
    std::size_t rg = 10;
    std::size_t budget = 6000;

    void validate() const
    {
        if (ps < 3)
            throw std::invalid_argument("swarm needs at least 3 particles for the ring");
        if (!(0.0 <= u0 && u0 <= uf && uf <= 1.0))
            throw std::invalid_argument("unification factors must satisfy 0 <= u0 <= uf <= 1");
        if (rg < 1)
            throw std::invalid_argument("refresh gap must be >= 1");
        if (budget < ps)
            throw std::invalid_argument("budget must cover the initial swarm");
    }

    /// Iterations after initialization that fit in the budget.
    [[nodiscard]] std::size_t max_iteration() const { return budget / ps - 1; }
};

struct Velocity2D
{
    std::vector<double> rho;
    std::vector<double> sigma;

    [[nodiscard]] std::size_t size() const { return sigma.size(); }
};

/// Binary 2 x N_t learning matrix derived from one exemplar.
struct LearningSet
{
    Bits rho_bits;
    Bits sigma_bits;
};

struct Particle
{
    Structure position;
    Velocity2D velocity;
    Structure pbest;
    double pbest_fitness = std::numeric_limits<double>::infinity();
    double fitness = std::numeric_limits<double>::infinity();
    double prev_fitness = std::numeric_limits<double>::infinity();
    std::size_t stagnation_count = 0;
};

inline Velocity2D random_velocity(std::size_t n, Rng& rng)
{
    Velocity2D v{std::vector<double>(n), std::vector<double>(n)};
    for (auto& x : v.rho)
        x = rng.uniform();
    for (auto& x : v.sigma)
        x = rng.uniform();
    return v;
}

/// Random swarm; fitness fields stay unset until the first evaluation.
inline std::vector<Particle> init_swarm(std::size_t n_terms, const SwarmConfig& config, Rng& rng)
{
    if (n_terms == 0)
        throw std::invalid_argument("dictionary must not be empty");
    std::vector<Particle> swarm(config.ps);
    for (auto& p : swarm) {
        p.velocity = random_velocity(n_terms, rng);
        p.position = random_structure(n_terms, rng);
        p.pbest = p.position;
    }
    return swarm;
}

/// Cardinality row is one-hot at xi - 1; term row copies the exemplar.
inline LearningSet derive_learning_set(const Structure& exemplar)
{
    if (exemplar.cardinality() == 0)
        throw std::invalid_argument("exemplar must select at least one term");
    LearningSet set{Bits(exemplar.size(), 0), exemplar.bits()};
    set.rho_bits[exemplar.cardinality() - 1] = 1;
    return set;
}

/// Fitness shift used when the swarm has non-positive fitness values.
inline constexpr double delta_epsilon = 1e-12;

/**
 * Self-learning weight.  With g the swarm fitness shifted to be positive
 * when needed, delta = 1 - g_t / max(g), clamped to [0, 1]; the sign is
 * positive only on strict improvement over the previous fitness.
 */
inline double compute_delta(double f_t, double f_prev, std::span<const double> swarm_fitness)
{
    if (swarm_fitness.empty())
        throw std::invalid_argument("swarm fitness vector is empty");
    const auto [lo, hi] = std::minmax_element(swarm_fitness.begin(), swarm_fitness.end());
    const double shift = *lo <= 0.0 ? -*lo + delta_epsilon : 0.0;
    const double g_t = f_t + shift;
    const double g_max = *hi + shift;
    double delta = g_max > 0.0 ? 1.0 - g_t / g_max : 0.0;
    if (!std::isfinite(delta))
        delta = 0.0;
    delta = std::clamp(delta, 0.0, 1.0);
    return f_t < f_prev ? delta : -delta;
}

namespace detail
{
/// Blends both velocity variants for one row.  Random factors are drawn
/// per entry and shared between the global and local expressions.
inline void update_row(std::vector<double>& v, const Bits& cog, const Bits& soc1,
                       const Bits& soc2, const Bits& self, double u, double delta,
                       const SwarmConfig& config, Rng& rng)
{
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        const double common = config.omega * v[j] + config.c1 * r1 * cog[j] + delta * self[j];
        const double vg = common + config.c2 * r2 * soc1[j];
        const double vl = common + config.c2 * r2 * soc2[j];
        v[j] = std::max(0.0, u * vg + (1.0 - u) * vl);
    }
}
} // namespace detail

/**
 * New velocity of `p`:
 *   v_g = w v + c1 R1 L_cog + c2 R2 L_soc,1 + delta L_self
 *   v_l = w v + c1 R1 L_cog + c2 R2 L_soc,2 + delta L_self
 *   v'  = max(0, u v_g + (1 - u) v_l)
 * with L_cog from pbest, L_soc,1 from gbest, L_soc,2 from nbest and L_self
 * from the current position.
 */
inline Velocity2D update_velocity(const Particle& p, const Structure& gbest,
                                  const Structure& nbest, double u, const SwarmConfig& config,
                                  double delta, Rng& rng)
{
    if (!(0.0 <= u && u <= 1.0))
        throw std::invalid_argument("unification factor must lie in [0, 1]");
    const auto cog = derive_learning_set(p.pbest);
    const auto soc1 = derive_learning_set(gbest);
    const auto soc2 = derive_learning_set(nbest);
    const auto self = derive_learning_set(p.position);
    Velocity2D v = p.velocity;
    detail::update_row(v.rho, cog.rho_bits, soc1.rho_bits, soc2.rho_bits, self.rho_bits, u, delta,
                       config, rng);
    detail::update_row(v.sigma, cog.sigma_bits, soc1.sigma_bits, soc2.sigma_bits,
                       self.sigma_bits, u, delta, config, rng);
    return v;
}

/**
 * Roulette wheel with a given draw r in [0, sum(rho)]: the smallest
 * cardinality j whose cumulative likelihood reaches r.  Zero-likelihood
 * entries are never chosen.  Returns 0 when every entry is zero.
 */
inline std::size_t select_cardinality_at(std::span<const double> rho, double r)
{
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < rho.size(); ++j) {
        if (!(rho[j] > 0.0))
            continue;
        cumulative += rho[j];
        last_positive = j + 1;
        if (r <= cumulative)
            return j + 1;
    }
    // r beyond the accumulated total through rounding: last non-zero slot.
    return last_positive;
}

/// Cardinality xi in 1..N_t drawn by roulette; uniform when rho is all zero.
inline std::size_t select_cardinality(std::span<const double> rho, Rng& rng)
{
    if (rho.empty())
        throw std::invalid_argument("cardinality likelihoods are empty");
    double total = 0.0;
    for (double x : rho)
        total += x > 0.0 ? x : 0.0;
    if (!(total > 0.0))
        return static_cast<std::size_t>(rng.index(rho.size())) + 1;
    const std::size_t xi = select_cardinality_at(rho, rng.uniform() * total);
    return xi;
}

/// Term indices by descending likelihood; ties by ascending tie priority.
inline std::vector<std::size_t> rank_terms(std::span<const double> sigma,
                                           std::span<const std::size_t> tie_priority)
{
    if (tie_priority.size() != sigma.size())
        throw std::invalid_argument("tie priorities must cover every term");
    std::vector<std::size_t> order(sigma.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sigma[a] != sigma[b])
            return sigma[a] > sigma[b];
        if (tie_priority[a] != tie_priority[b])
            return tie_priority[a] < tie_priority[b];
        return a < b;
    });
    return order;
}

/// Top-xi ranked terms switched on.
inline Structure position_from_ranking(std::span<const std::size_t> ranking, std::size_t xi)
{
    if (xi == 0 || xi > ranking.size())
        throw std::invalid_argument("cardinality out of range");
    Bits bits(ranking.size(), 0);
    for (std::size_t r = 0; r < xi; ++r)
        bits[ranking[r]] = 1;
    return Structure(std::move(bits));
}

/// Position update with an explicit roulette draw and tie priorities.
inline Structure update_position_at(const Velocity2D& v, double r,
                                    std::span<const std::size_t> tie_priority)
{
    const std::size_t xi = select_cardinality_at(v.rho, r);
    if (xi == 0)
        throw std::invalid_argument("cardinality likelihoods are all zero");
    return position_from_ranking(rank_terms(v.sigma, tie_priority), xi);
}

inline Structure update_position(const Velocity2D& v, Rng& rng)
{
    const std::size_t xi = select_cardinality(v.rho, rng);
    const auto priority = rng.permutation(v.size());
    return position_from_ranking(rank_terms(v.sigma, priority), xi);
}

/// Index of the smallest pbest fitness among ring neighbors i-1, i, i+1.
inline std::size_t ring_best(const std::vector<Particle>& swarm, std::size_t i)
{
    const std::size_t n = swarm.size();
    const std::size_t candidates[3] = {(i + n - 1) % n, i, (i + 1) % n};
    std::size_t best = candidates[0];
    for (auto c : candidates)
        if (swarm[c].pbest_fitness < swarm[best].pbest_fitness)
            best = c;
    return best;
}

inline std::size_t swarm_best(const std::vector<Particle>& swarm)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < swarm.size(); ++i)
        if (swarm[i].pbest_fitness < swarm[best].pbest_fitness)
            best = i;
    return best;
}

/// Observer hook for tests: called after every completed iteration.
struct NoSwarmObserver
{
    void operator()(std::size_t, const std::vector<Particle>&, std::size_t) const {}
};

/**
 * One 2D-UPSO run.  One evaluation per oracle call; the run stops once the
 * budget is spent, possibly part-way through an iteration.  `observer` sees
 * (iteration, swarm, gbest index) after each iteration.
 */
template <Objective F, class Observer = NoSwarmObserver>
SearchResult run_2dupso(F&& objective, std::size_t n_terms, const SwarmConfig& config, Rng& rng,
                        Observer&& observer = {})
{
    config.validate();
    EvaluationCounter counter(objective, config.budget);
    auto swarm = init_swarm(n_terms, config, rng);
    for (auto& p : swarm) {
        p.fitness = counter(p.position);
        p.pbest_fitness = p.fitness;
    }
    std::size_t gbest = swarm_best(swarm);
    observer(std::size_t{0}, std::as_const(swarm), gbest);

    const std::size_t t_max = config.max_iteration();
    std::vector<double> fitness(swarm.size());
    for (std::size_t t = 1; t <= t_max && !counter.exhausted(); ++t) {
        const double u =
            config.u0 + (config.uf - config.u0) * static_cast<double>(t) / static_cast<double>(t_max);
        for (std::size_t i = 0; i < swarm.size(); ++i)
            fitness[i] = swarm[i].fitness;
        const Structure gbest_position = swarm[gbest].pbest;

        std::vector<Structure> nbest(swarm.size());
        for (std::size_t i = 0; i < swarm.size(); ++i)
            nbest[i] = swarm[ring_best(swarm, i)].pbest;

        for (std::size_t i = 0; i < swarm.size(); ++i) {
            auto& p = swarm[i];
            if (p.stagnation_count >= config.rg) {
                p.velocity = random_velocity(n_terms, rng);
                p.stagnation_count = 0;
            }
            const double delta = compute_delta(p.fitness, p.prev_fitness, fitness);
            p.velocity = update_velocity(p, gbest_position, nbest[i], u, config, delta, rng);
            p.position = update_position(p.velocity, rng);
        }

        for (auto& p : swarm) {
            if (counter.exhausted())
                break;
            p.prev_fitness = p.fitness;
            p.fitness = counter(p.position);
            if (p.fitness < p.pbest_fitness) {
                p.pbest = p.position;
                p.pbest_fitness = p.fitness;
            } else {
                // cumulative; only a velocity refresh clears it
                ++p.stagnation_count;
            }
        }
        gbest = swarm_best(swarm);
        observer(t, std::as_const(swarm), gbest);
    }
    return counter.take();
}

} // namespace narxsel

#endif
