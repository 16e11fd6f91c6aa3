#ifndef NARXSEL_SUMMARY_HPP
#define NARXSEL_SUMMARY_HPP

/** @file
 * Aggregation of run records into selection-frequency tables and mean
 * convergence traces, plus their CSV/JSON renderings.
 */

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "experiment.hpp"
#include "metrics.hpp"
#include "records.hpp"

namespace narxsel
{

struct ExperimentSummary
{
    ExperimentKey key;
    std::size_t runs = 0;
    std::size_t failed_runs = 0;
    std::optional<std::size_t> expected_runs;
    FrequencyTable table;
    SpuriousStats spurious;
    double min_system_nu = 0.0;
    /// Terms with nu >= threshold; empty when none qualify.
    std::vector<std::size_t> extracted;
    /// nu of the true terms in T1..Tn order.
    std::vector<double> system_term_nu;
    std::vector<double> mean_trace;
    double mean_final_best = 0.0;

    [[nodiscard]] bool complete() const { return !expected_runs || runs == *expected_runs; }
};

namespace detail
{
inline auto key_order(const ExperimentKey& k)
{
    return std::make_tuple(static_cast<int>(k.system), static_cast<int>(k.algorithm),
                           static_cast<int>(k.fitness.kind), k.fitness.varrho,
                           k.snr_db ? -*k.snr_db : -std::numeric_limits<double>::infinity());
}

inline std::string num(double v) { return nlohmann::json(v).dump(); }
} // namespace detail

/**
 * Groups records by experiment key.  Failed runs are counted but excluded
 * from the statistics; duplicate run ids keep the first successful record.
 */
inline std::vector<ExperimentSummary> summarize(const std::vector<RunRecord>& records,
                                                std::optional<std::size_t> expected_runs = {},
                                                double threshold = 0.9)
{
    std::map<std::string, std::vector<const RunRecord*>> groups;
    for (const auto& r : records)
        groups[r.key.str()].push_back(&r);

    std::vector<ExperimentSummary> out;
    for (auto& [label, members] : groups) {
        std::sort(members.begin(), members.end(), [](const RunRecord* a, const RunRecord* b) {
            return std::make_tuple(a->run, !a->ok) < std::make_tuple(b->run, !b->ok);
        });
        ExperimentSummary s;
        s.key = members.front()->key;
        s.expected_runs = expected_runs;
        const auto sys = system_definition(s.key.system);
        const TermDictionary dict(sys.dictionary);

        std::vector<const RunRecord*> ok;
        std::optional<std::size_t> last_run;
        for (const auto* r : members) {
            if (last_run && *last_run == r->run)
                continue;
            last_run = r->run;
            if (r->ok && r->best)
                ok.push_back(r);
            else
                ++s.failed_runs;
        }
        s.runs = ok.size();
        if (ok.empty()) {
            out.push_back(std::move(s));
            continue;
        }

        std::vector<Structure> finals;
        for (const auto* r : ok)
            finals.push_back(*r->best);
        s.table = selection_frequency(finals, dict.size(), sys.true_structure(dict).bits());
        s.spurious = spurious_stats(s.table);
        s.min_system_nu = min_system_nu(s.table);
        for (auto i : sys.term_indices(dict))
            s.system_term_nu.push_back(s.table.nu(i));
        try {
            s.extracted = extract_structure(s.table, threshold).indices();
        } catch (const NoStructureAboveThreshold&) {
        }

        std::size_t longest = 0;
        for (const auto* r : ok)
            longest = std::max(longest, r->trace.size());
        s.mean_trace.assign(longest, 0.0);
        std::vector<std::size_t> contributors(longest, 0);
        for (const auto* r : ok)
            for (std::size_t i = 0; i < r->trace.size(); ++i) {
                s.mean_trace[i] += r->trace[i];
                ++contributors[i];
            }
        for (std::size_t i = 0; i < longest; ++i)
            s.mean_trace[i] /= static_cast<double>(contributors[i]);
        double final_sum = 0.0;
        for (const auto* r : ok)
            final_sum += r->best_fitness;
        s.mean_final_best = final_sum / static_cast<double>(ok.size());
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return detail::key_order(a.key) < detail::key_order(b.key);
    });
    return out;
}

inline nlohmann::ordered_json summary_json(const ExperimentSummary& s)
{
    const auto sys = system_definition(s.key.system);
    const TermDictionary dict(sys.dictionary);
    nlohmann::ordered_json j;
    j["system"] = to_string(s.key.system);
    j["algorithm"] = to_string(s.key.algorithm);
    j["fitness"] = s.key.fitness.label();
    j["snr_db"] = s.key.snr_db ? nlohmann::ordered_json(*s.key.snr_db) : nlohmann::ordered_json();
    j["runs"] = s.runs;
    j["failed_runs"] = s.failed_runs;
    j["expected_runs"] = s.expected_runs ? nlohmann::ordered_json(*s.expected_runs) : nlohmann::ordered_json();
    j["complete"] = s.complete();
    if (s.runs == 0)
        return j;
    j["r"] = s.spurious.r;
    j["nu_max"] = s.spurious.nu_max;
    j["n_spur"] = s.spurious.n_spur;
    j["min_system_nu"] = s.min_system_nu;
    j["system_term_nu"] = s.system_term_nu;
    auto extracted = nlohmann::ordered_json::array();
    for (auto i : s.extracted)
        extracted.push_back(dict[i].render());
    j["extracted_structure"] = extracted;
    j["mean_final_best"] = s.mean_final_best;
    auto terms = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < s.table.size(); ++i)
        terms.push_back({{"term", i},
                         {"rendered_term", dict[i].render()},
                         {"nu", s.table.nu(i)},
                         {"is_system_term", s.table.is_system_term(i)}});
    j["nu"] = terms;
    return j;
}

inline void write_convergence_csv(std::ostream& out, const ExperimentSummary& s)
{
    out << "fe,mean_best_fitness,algorithm\n";
    const auto alg = to_string(s.key.algorithm);
    for (std::size_t i = 0; i < s.mean_trace.size(); ++i)
        out << i + 1 << ',' << detail::num(s.mean_trace[i]) << ',' << alg << '\n';
}

inline void write_summary_table(std::ostream& out, const std::vector<ExperimentSummary>& all)
{
    out << "system,algorithm,fitness,snr_db,runs,failed_runs,expected_runs,complete,r,nu_max,"
           "min_system_nu,mean_final_best,extracted_terms,system_term_nu\n";
    for (const auto& s : all) {
        const TermDictionary dict(system_definition(s.key.system).dictionary);
        std::string extracted, nus;
        for (auto i : s.extracted)
            extracted += (extracted.empty() ? "" : " + ") + dict[i].render();
        for (double v : s.system_term_nu)
            nus += (nus.empty() ? "" : " ") + detail::num(v);
        out << to_string(s.key.system) << ',' << to_string(s.key.algorithm) << ','
            << s.key.fitness.label() << ',' << snr_label(s.key.snr_db) << ',' << s.runs << ','
            << s.failed_runs << ','
            << (s.expected_runs ? std::to_string(*s.expected_runs) : std::string()) << ','
            << (s.complete() ? 1 : 0) << ',';
        if (s.runs)
            out << detail::num(s.spurious.r) << ',' << detail::num(s.spurious.nu_max) << ','
                << detail::num(s.min_system_nu) << ',' << detail::num(s.mean_final_best) << ','
                << '"' << extracted << "\"," << nus << '\n';
        else
            out << ",,,,,\n";
    }
}

/// Writes summary.csv plus per-experiment frequency, JSON and convergence files.
inline void write_summaries(const std::string& dir, const std::vector<ExperimentSummary>& all)
{
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    auto open = [&](const std::string& name) {
        std::ofstream f(base / name, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + (base / name).string());
        return f;
    };
    {
        auto f = open("summary.csv");
        write_summary_table(f, all);
    }
    for (const auto& s : all) {
        const auto slug = s.key.slug();
        {
            auto f = open(slug + ".json");
            f << summary_json(s).dump(2) << '\n';
        }
        if (s.runs == 0)
            continue;
        {
            auto f = open(slug + "_frequency.csv");
            write_frequency_csv(f, s.table, TermDictionary(system_definition(s.key.system).dictionary));
        }
        {
            auto f = open(slug + "_convergence.csv");
            write_convergence_csv(f, s);
        }
    }
}

} // namespace narxsel

#endif
