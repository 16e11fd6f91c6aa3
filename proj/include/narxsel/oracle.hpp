#ifndef NARXSEL_ORACLE_HPP
#define NARXSEL_ORACLE_HPP

/** @file
 * Reduced benchmark problems small enough for exhaustive search, used to
 * check that the optimizers reach the true optimum.
 */

#include <optional>

#include "exhaustive.hpp"
#include "experiment.hpp"
#include "fitness.hpp"
#include "systems.hpp"

namespace narxsel
{

struct ReducedProblemSpec
{
    SystemId system = SystemId::s1;
    DictionaryConfig dictionary{2, 2, 0, 2};
    std::size_t n = 667;
    std::size_t validation_length = 200;
    std::optional<double> snr_db;
    FitnessSpec fitness;
    std::uint64_t seed = 2019;
};

inline Dataset reduced_dataset(const ReducedProblemSpec& spec)
{
    DataOptions options;
    options.n = spec.n;
    options.validation_length = spec.validation_length;
    options.noise.snr_db = spec.snr_db;
    Rng rng(mix_seed(spec.seed, fnv1a64("oracle-data")));
    return make_dataset(spec.system, options, rng);
}

/// The system's true terms must all exist in the reduced dictionary.
inline FitnessProblem reduced_problem(const ReducedProblemSpec& spec, bool memoize = true)
{
    TermDictionary dict(spec.dictionary);
    const auto sys = system_definition(spec.system);
    for (const auto& t : sys.terms)
        if (!dict.contains(t.term))
            throw std::invalid_argument("reduced dictionary lacks system term " +
                                        t.term.render());
    return FitnessProblem(std::move(dict), reduced_dataset(spec), spec.fitness, memoize);
}

inline ExhaustiveResult run_oracle(const ReducedProblemSpec& spec)
{
    auto problem = reduced_problem(spec, false);
    return exhaustive_search(problem, problem.dimension());
}

} // namespace narxsel

#endif
