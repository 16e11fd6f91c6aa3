#ifndef NARXSEL_METRICS_HPP
#define NARXSEL_METRICS_HPP

/** @file
 * Selection-frequency statistics over independent runs.
 *
 * nu_i is the fraction of runs whose final structure includes term i.
 * Spurious terms are those selected at least once but absent from the true
 * system; r is their count over N_t and nu_max their largest frequency.
 */

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "dictionary.hpp"
#include "structure.hpp"

namespace narxsel
{

struct FrequencyTable
{
    std::vector<std::size_t> counts;
    std::size_t runs = 0;
    /// Optional ground truth; empty when unknown.
    Bits system_terms;

    [[nodiscard]] std::size_t size() const { return counts.size(); }
    [[nodiscard]] double nu(std::size_t i) const
    {
        return static_cast<double>(counts.at(i)) / static_cast<double>(runs);
    }
    [[nodiscard]] std::vector<double> nus() const
    {
        std::vector<double> out(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i)
            out[i] = nu(i);
        return out;
    }
    [[nodiscard]] bool is_system_term(std::size_t i) const
    {
        return !system_terms.empty() && system_terms.at(i) != 0;
    }
};

inline FrequencyTable selection_frequency(const std::vector<Structure>& finals, std::size_t n_terms,
                                          const Bits& system_terms = {})
{
    if (finals.empty())
        throw std::invalid_argument("selection frequency needs at least one run");
    if (!system_terms.empty() && system_terms.size() != n_terms)
        throw std::invalid_argument("system term mask length does not match");
    FrequencyTable table{std::vector<std::size_t>(n_terms, 0), finals.size(), system_terms};
    for (const auto& s : finals) {
        if (s.size() != n_terms)
            throw std::invalid_argument("structure length does not match");
        for (std::size_t i = 0; i < n_terms; ++i)
            table.counts[i] += s[i] ? 1 : 0;
    }
    return table;
}

struct SpuriousStats
{
    double r = 0.0;
    double nu_max = 0.0;
    std::size_t n_spur = 0;
};

inline SpuriousStats spurious_stats(const FrequencyTable& table)
{
    if (table.system_terms.size() != table.size())
        throw std::invalid_argument("spurious statistics need the system terms");
    SpuriousStats out;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table.counts[i] == 0 || table.is_system_term(i))
            continue;
        ++out.n_spur;
        out.nu_max = std::max(out.nu_max, table.nu(i));
    }
    out.r = static_cast<double>(out.n_spur) / static_cast<double>(table.size());
    return out;
}

class NoStructureAboveThreshold : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Terms with nu >= threshold.
inline Structure extract_structure(const FrequencyTable& table, double threshold = 0.9)
{
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("threshold must lie in (0, 1]");
    Bits bits(table.size(), 0);
    for (std::size_t i = 0; i < table.size(); ++i)
        bits[i] = table.nu(i) >= threshold;
    if (Structure::count(bits) == 0)
        throw NoStructureAboveThreshold("no structure above threshold");
    return Structure(std::move(bits));
}

/// Minimum nu over the system terms (1 if none are marked).
inline double min_system_nu(const FrequencyTable& table)
{
    double lo = 1.0;
    for (std::size_t i = 0; i < table.size(); ++i)
        if (table.is_system_term(i))
            lo = std::min(lo, table.nu(i));
    return lo;
}

/// CSV `term,rendered_term,nu,is_system_term`, one row per dictionary term.
inline void write_frequency_csv(std::ostream& out, const FrequencyTable& table,
                                const TermDictionary& dict)
{
    if (dict.size() != table.size())
        throw std::invalid_argument("dictionary does not match frequency table");
    out << "term,rendered_term,nu,is_system_term\n";
    for (std::size_t i = 0; i < table.size(); ++i)
        out << i << ',' << dict[i].render() << ',' << nlohmann::json(table.nu(i)).dump() << ','
            << (table.is_system_term(i) ? 1 : 0) << '\n';
}

} // namespace narxsel

#endif
