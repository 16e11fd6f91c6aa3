#ifndef NARXSEL_EXHAUSTIVE_HPP
#define NARXSEL_EXHAUSTIVE_HPP

#include <cstdint>
#include <stdexcept>

#include "search.hpp"
#include "structure.hpp"

namespace narxsel
{

struct ExhaustiveResult
{
    Structure best;
    double best_fitness = 0.0;
    std::uint64_t evaluated = 0;
    /// Other structures whose fitness equals the optimum exactly.
    std::uint64_t ties = 0;
};

inline constexpr std::size_t exhaustive_limit = 26;

/**
 * Scores all 2^n - 1 non-empty structures in binary counting order (bit i
 * of the counter is term i); the first minimizer wins ties.
 */
template <Objective F>
ExhaustiveResult exhaustive_search(F&& objective, std::size_t n_terms)
{
    if (n_terms == 0 || n_terms > exhaustive_limit)
        throw std::invalid_argument("exhaustive search supports 1.." +
                                    std::to_string(exhaustive_limit) + " terms");
    ExhaustiveResult out;
    const std::uint64_t end = std::uint64_t{1} << n_terms;
    Bits bits(n_terms, 0);
    for (std::uint64_t mask = 1; mask < end; ++mask) {
        for (std::size_t i = 0; i < n_terms; ++i)
            bits[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
        Structure s(bits);
        const double f = static_cast<double>(objective(s));
        ++out.evaluated;
        if (mask == 1 || f < out.best_fitness) {
            out.best = std::move(s);
            out.best_fitness = f;
            out.ties = 0;
        } else if (f == out.best_fitness) {
            ++out.ties;
        }
    }
    return out;
}

} // namespace narxsel

#endif
