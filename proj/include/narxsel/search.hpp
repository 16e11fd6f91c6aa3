#ifndef NARXSEL_SEARCH_HPP
#define NARXSEL_SEARCH_HPP

#include <concepts>
#include <cstddef>
#include <limits>
#include <vector>

#include "structure.hpp"

namespace narxsel
{

/// A fitness oracle: total function from structures to finite reals, minimized.
template <class F>
concept Objective = std::invocable<F&, const Structure&> &&
                    std::convertible_to<std::invoke_result_t<F&, const Structure&>, double>;

/// Outcome of one search run.
struct SearchResult
{
    Structure best;
    double best_fitness = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    /// Best-so-far fitness after each evaluation.
    std::vector<double> trace;
};

/// Counts evaluations and keeps the best-ever structure and trace.
template <Objective F>
class EvaluationCounter
{
public:
    EvaluationCounter(F& objective, std::size_t budget) : objective_(objective), budget_(budget)
    {
        result_.trace.reserve(budget);
    }

    double operator()(const Structure& s)
    {
        const double f = static_cast<double>(objective_(s));
        ++result_.evaluations;
        if (f < result_.best_fitness || result_.evaluations == 1) {
            result_.best_fitness = f;
            result_.best = s;
        }
        result_.trace.push_back(result_.best_fitness);
        return f;
    }

    [[nodiscard]] bool exhausted() const { return result_.evaluations >= budget_; }
    [[nodiscard]] std::size_t evaluations() const { return result_.evaluations; }
    [[nodiscard]] SearchResult take() { return std::move(result_); }

private:
    F& objective_;
    std::size_t budget_;
    SearchResult result_;
};

} // namespace narxsel

#endif
