#ifndef NARXSEL_DICTIONARY_HPP
#define NARXSEL_DICTIONARY_HPP

/** @file
 * Candidate term dictionaries for polynomial NARX models.
 *
 * A term is a monomial in lagged outputs y(k-j) and lagged inputs u(k-j).
 * The dictionary is the ordered universe of every such monomial up to a
 * given degree, led by the constant term.
 */

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace narxsel
{

enum class Signal : std::uint8_t { output = 0, input = 1 };

/// One factor of a monomial: a signal at lag >= 1.
struct Factor
{
    Signal signal;
    int lag;

    friend constexpr auto operator<=>(const Factor&, const Factor&) = default;
};

/// Lag and degree settings of a dictionary.  Noise lags stay at zero: no
/// moving-average terms are enumerated.
struct DictionaryConfig
{
    int n_y = 0;
    int n_u = 0;
    int n_e = 0;
    int degree = 1;

    [[nodiscard]] int max_lag() const { return std::max(n_y, n_u); }
    [[nodiscard]] int variable_count() const { return n_y + n_u + n_e; }

    void validate() const
    {
        if (n_y < 0 || n_u < 0)
            throw std::invalid_argument("dictionary lags must be non-negative");
        if (n_e != 0)
            throw std::invalid_argument("noise lags are not supported (n_e must be 0)");
        if (degree < 1)
            throw std::invalid_argument("polynomial degree must be >= 1");
        if (n_y + n_u < 1)
            throw std::invalid_argument("dictionary needs at least one lagged variable");
    }

    friend bool operator==(const DictionaryConfig&, const DictionaryConfig&) = default;
};

/**
 * Total number of candidate terms,
 *   N_t = sum_{i=0}^{N_l} n_i,  n_0 = 1,  n_i = n_{i-1} (n_y + n_u + n_e + i - 1) / i.
 *
 * Each n_i is the binomial C(m + i - 1, i) so the division is exact.  Only
 * the counting formula admits n_e > 0.  Throws std::overflow_error instead
 * of wrapping.
 */
inline std::uint64_t model_size(int n_y, int n_u, int n_e, int degree)
{
    if (n_y < 0 || n_u < 0 || n_e < 0 || degree < 1 || n_y + n_u + n_e < 1)
        throw std::invalid_argument("invalid dictionary configuration");
    using wide = unsigned __int128;
    const auto m = static_cast<std::uint64_t>(n_y) + static_cast<std::uint64_t>(n_u) +
                   static_cast<std::uint64_t>(n_e);
    constexpr auto limit = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t n_i = 1;
    std::uint64_t total = 1;
    for (int i = 1; i <= degree; ++i) {
        const wide product = static_cast<wide>(n_i) * (m + static_cast<std::uint64_t>(i) - 1);
        const wide next = product / static_cast<wide>(i);
        if (next > limit)
            throw std::overflow_error("model size overflows 64-bit count");
        n_i = static_cast<std::uint64_t>(next);
        if (total > limit - n_i)
            throw std::overflow_error("model size overflows 64-bit count");
        total += n_i;
    }
    return total;
}

inline std::uint64_t model_size(const DictionaryConfig& config)
{
    return model_size(config.n_y, config.n_u, config.n_e, config.degree);
}

/// A monomial; factors are kept sorted, outputs before inputs, small lags first.
class Term
{
public:
    Term() = default;

    explicit Term(std::vector<Factor> factors) : factors_(std::move(factors))
    {
        for (const auto& f : factors_)
            if (f.lag < 1)
                throw std::invalid_argument("term lags must be >= 1");
        std::sort(factors_.begin(), factors_.end());
    }

    [[nodiscard]] const std::vector<Factor>& factors() const { return factors_; }
    [[nodiscard]] int degree() const { return static_cast<int>(factors_.size()); }
    [[nodiscard]] bool is_constant() const { return factors_.empty(); }

    [[nodiscard]] int max_lag() const
    {
        int lag = 0;
        for (const auto& f : factors_)
            lag = std::max(lag, f.lag);
        return lag;
    }

    /// Canonical order: degree first, then lexicographic on sorted factors.
    friend bool operator<(const Term& a, const Term& b)
    {
        if (a.degree() != b.degree())
            return a.degree() < b.degree();
        return a.factors_ < b.factors_;
    }
    friend bool operator==(const Term&, const Term&) = default;

    /// Textual form: `1`, `y(k-1)`, `y(k-1)*u(k-2)`.
    [[nodiscard]] std::string render() const
    {
        if (factors_.empty())
            return "1";
        std::string out;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (i)
                out += '*';
            out += factors_[i].signal == Signal::output ? "y(k-" : "u(k-";
            out += std::to_string(factors_[i].lag);
            out += ')';
        }
        return out;
    }

private:
    std::vector<Factor> factors_;
};

inline Term y_(int lag) { return Term({{Signal::output, lag}}); }
inline Term u_(int lag) { return Term({{Signal::input, lag}}); }

/// Product of two terms.
inline Term operator*(const Term& a, const Term& b)
{
    auto factors = a.factors();
    factors.insert(factors.end(), b.factors().begin(), b.factors().end());
    return Term(std::move(factors));
}

/// Value of one term evaluated on measured signals at sample k (k >= term lag).
inline double term_value(const Term& term, const std::vector<double>& u,
                         const std::vector<double>& y, std::size_t k)
{
    double v = 1.0;
    for (const auto& f : term.factors()) {
        const auto idx = k - static_cast<std::size_t>(f.lag);
        v *= f.signal == Signal::output ? y[idx] : u[idx];
    }
    return v;
}

class TermDictionary
{
public:
    TermDictionary() = default;

    explicit TermDictionary(const DictionaryConfig& config) : config_(config)
    {
        config_.validate();
        const auto expected = model_size(config_);
        if (expected > static_cast<std::uint64_t>(std::numeric_limits<std::size_t>::max() / 2))
            throw std::overflow_error("dictionary too large to enumerate");
        terms_.reserve(static_cast<std::size_t>(expected));
        terms_.emplace_back();

        // Variables in canonical order: y(k-1..n_y) then u(k-1..n_u).
        std::vector<Factor> variables;
        for (int j = 1; j <= config_.n_y; ++j)
            variables.push_back({Signal::output, j});
        for (int j = 1; j <= config_.n_u; ++j)
            variables.push_back({Signal::input, j});

        std::vector<std::size_t> pick;
        for (int d = 1; d <= config_.degree; ++d)
            enumerate(variables, pick, 0, static_cast<std::size_t>(d));
    }

    [[nodiscard]] const DictionaryConfig& config() const { return config_; }
    [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] const Term& operator[](std::size_t i) const { return terms_.at(i); }
    [[nodiscard]] int max_lag() const { return config_.max_lag(); }

    /// Position of a term; throws std::out_of_range if it is not a candidate.
    [[nodiscard]] std::size_t index_of(const Term& term) const
    {
        const auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
        if (it == terms_.end() || !(*it == term))
            throw std::out_of_range("term " + term.render() + " is not in the dictionary");
        return static_cast<std::size_t>(it - terms_.begin());
    }

    [[nodiscard]] bool contains(const Term& term) const
    {
        return std::binary_search(terms_.begin(), terms_.end(), term);
    }

private:
    // Multisets of the given size as nondecreasing index sequences, in lex order.
    void enumerate(const std::vector<Factor>& variables, std::vector<std::size_t>& pick,
                   std::size_t start, std::size_t remaining)
    {
        if (remaining == 0) {
            std::vector<Factor> factors;
            factors.reserve(pick.size());
            for (auto v : pick)
                factors.push_back(variables[v]);
            terms_.emplace_back(std::move(factors));
            return;
        }
        for (std::size_t v = start; v < variables.size(); ++v) {
            pick.push_back(v);
            enumerate(variables, pick, v, remaining - 1);
            pick.pop_back();
        }
    }

    DictionaryConfig config_;
    std::vector<Term> terms_;
};

inline TermDictionary build_dictionary(const DictionaryConfig& config)
{
    return TermDictionary(config);
}

} // namespace narxsel

#endif
