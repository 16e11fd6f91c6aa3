#ifndef NARXSEL_EXPERIMENT_HPP
#define NARXSEL_EXPERIMENT_HPP

/** @file
 * Experiment configuration, run planning, seeding and single-run execution.
 */

#include <chrono>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fitness.hpp"
#include "ga.hpp"
#include "random.hpp"
#include "swarm2d.hpp"
#include "systems.hpp"

namespace narxsel
{

enum class Algorithm { upso2d, ga };
enum class DataMode { per_run, fixed };

inline std::string to_string(Algorithm a) { return a == Algorithm::upso2d ? "2dupso" : "ga"; }
inline std::string to_string(DataMode m) { return m == DataMode::per_run ? "per_run" : "fixed"; }

inline Algorithm parse_algorithm(const std::string& text)
{
    if (text == "2dupso" || text == "2D-UPSO" || text == "upso")
        return Algorithm::upso2d;
    if (text == "ga" || text == "GA")
        return Algorithm::ga;
    throw std::invalid_argument("unknown algorithm '" + text + "'");
}

inline DataMode parse_data_mode(const std::string& text)
{
    if (text == "per_run")
        return DataMode::per_run;
    if (text == "fixed")
        return DataMode::fixed;
    throw std::invalid_argument("unknown data mode '" + text + "'");
}

/// `50` for 50 dB, `none` for noise-free.
inline std::string snr_label(std::optional<double> snr)
{
    return snr ? detail::format_double(*snr) : "none";
}

inline std::optional<double> parse_snr(const std::string& text)
{
    if (text == "none" || text == "inf")
        return std::nullopt;
    const double v = detail::parse_double(text);
    if (!(v > 0.0))
        throw std::invalid_argument("SNR must be positive (dB)");
    return v;
}

/// Factor levels and run settings of a sweep.  Defaults reproduce the
/// first stage of the benchmark study.
struct ExperimentConfig
{
    std::vector<SystemId> systems{SystemId::s1, SystemId::s2, SystemId::s3, SystemId::s4};
    std::vector<Algorithm> algorithms{Algorithm::upso2d};
    std::vector<FitnessSpec> fitness{FitnessSpec::bic(), FitnessSpec::aic(2), FitnessSpec::aic(8),
                                     FitnessSpec::aic(64), FitnessSpec::aic(256)};
    std::vector<std::optional<double>> snr_db{50.0, 40.0, 30.0};
    std::size_t runs = 40;
    std::size_t budget = 6000;
    std::uint64_t base_seed = 2019;
    DataMode data_mode = DataMode::per_run;
    std::string output_dir = "results";

    void validate() const
    {
        if (runs < 1)
            throw std::invalid_argument("runs must be >= 1");
        if (systems.empty() || algorithms.empty() || fitness.empty() || snr_db.empty())
            throw std::invalid_argument("every factor needs at least one level");
        for (auto a : algorithms) {
            const auto minimum = a == Algorithm::upso2d ? SwarmConfig{}.ps : GAConfig{}.population;
            if (budget < minimum)
                throw std::invalid_argument("budget smaller than the " + to_string(a) +
                                            " population");
        }
        for (const auto& f : fitness)
            f.validate();
    }
};

namespace detail
{
inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}
} // namespace detail

/**
 * Parses `key = value` lines; lists are comma separated, `#` starts a
 * comment.  Keys: systems, algorithms, fitness, snr_db, runs, budget,
 * base_seed, data_mode, output_dir.  Missing keys keep their defaults.
 */
inline ExperimentConfig parse_experiment_config(std::istream& in)
{
    ExperimentConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        const auto items = detail::split_list(value);
        try {
            if (key == "systems") {
                cfg.systems.clear();
                for (const auto& i : items)
                    cfg.systems.push_back(parse_system_id(i));
            } else if (key == "algorithms") {
                cfg.algorithms.clear();
                for (const auto& i : items)
                    cfg.algorithms.push_back(parse_algorithm(i));
            } else if (key == "fitness") {
                cfg.fitness.clear();
                for (const auto& i : items)
                    cfg.fitness.push_back(parse_fitness_spec(i));
            } else if (key == "snr_db") {
                cfg.snr_db.clear();
                for (const auto& i : items)
                    cfg.snr_db.push_back(parse_snr(i));
            } else if (key == "runs") {
                cfg.runs = std::stoull(value);
            } else if (key == "budget") {
                cfg.budget = std::stoull(value);
            } else if (key == "base_seed") {
                cfg.base_seed = std::stoull(value);
            } else if (key == "data_mode") {
                cfg.data_mode = parse_data_mode(value);
            } else if (key == "output_dir") {
                cfg.output_dir = value;
            } else {
                throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " +
                                        e.what());
        }
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config " + path);
    return parse_experiment_config(in);
}

/// Renders a config in the parseable text form.
inline std::string format_experiment_config(const ExperimentConfig& cfg)
{
    auto join = [](const auto& items, auto&& fmt) {
        std::string s;
        for (const auto& i : items) {
            if (!s.empty())
                s += ", ";
            s += fmt(i);
        }
        return s;
    };
    std::ostringstream out;
    out << "systems = " << join(cfg.systems, [](SystemId id) { return to_string(id); }) << '\n'
        << "algorithms = " << join(cfg.algorithms, [](Algorithm a) { return to_string(a); })
        << '\n'
        << "fitness = " << join(cfg.fitness, [](const FitnessSpec& f) { return f.label(); })
        << '\n'
        << "snr_db = " << join(cfg.snr_db, [](std::optional<double> s) { return snr_label(s); })
        << '\n'
        << "runs = " << cfg.runs << '\n'
        << "budget = " << cfg.budget << '\n'
        << "base_seed = " << cfg.base_seed << '\n'
        << "data_mode = " << to_string(cfg.data_mode) << '\n'
        << "output_dir = " << cfg.output_dir << '\n';
    return out.str();
}

/// Factor levels identifying one experiment (all runs share it).
struct ExperimentKey
{
    SystemId system = SystemId::s1;
    Algorithm algorithm = Algorithm::upso2d;
    FitnessSpec fitness;
    std::optional<double> snr_db;

    [[nodiscard]] std::string str() const
    {
        return to_string(system) + '|' + to_string(algorithm) + '|' + fitness.label() + '|' +
               snr_label(snr_db);
    }

    /// Filesystem-friendly form, e.g. `S1_2dupso_AIC256_50dB`.
    [[nodiscard]] std::string slug() const
    {
        std::string f = fitness.label();
        std::erase(f, ':');
        for (auto& c : f)
            if (c == '.')
                c = 'p';
        return to_string(system) + '_' + to_string(algorithm) + '_' + f + '_' +
               (snr_db ? snr_label(snr_db) + "dB" : std::string("noisefree"));
    }

    friend bool operator==(const ExperimentKey& a, const ExperimentKey& b)
    {
        return a.str() == b.str();
    }
};

struct PlannedRun
{
    ExperimentKey key;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    std::uint64_t data_seed = 0;
    std::size_t budget = 6000;

    [[nodiscard]] std::string id() const { return key.str() + '|' + std::to_string(run); }
};

/**
 * Seeds: run seed = mix(base, FNV-1a(key|run)), search stream derived from
 * the run seed.  The dataset seed depends only on (system, snr, run) in
 * per_run mode and on (system, snr) in fixed mode, so every algorithm and
 * fitness function sees the same data for a given run index.
 */
inline std::vector<PlannedRun> plan_runs(const ExperimentConfig& cfg)
{
    cfg.validate();
    std::vector<PlannedRun> plan;
    for (auto sys : cfg.systems)
        for (auto alg : cfg.algorithms)
            for (const auto& fit : cfg.fitness)
                for (const auto& snr : cfg.snr_db)
                    for (std::size_t r = 0; r < cfg.runs; ++r) {
                        PlannedRun p;
                        p.key = {sys, alg, fit, snr};
                        p.run = r;
                        p.budget = cfg.budget;
                        p.seed = mix_seed(cfg.base_seed, fnv1a64(p.id()));
                        std::string data_id = "data|" + to_string(sys) + '|' + snr_label(snr);
                        if (cfg.data_mode == DataMode::per_run)
                            data_id += '|' + std::to_string(r);
                        p.data_seed = mix_seed(cfg.base_seed, fnv1a64(data_id));
                        plan.push_back(std::move(p));
                    }
    return plan;
}

/// One persisted run outcome.
struct RunRecord
{
    ExperimentKey key;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    std::uint64_t data_seed = 0;
    bool ok = true;
    std::string error;
    std::optional<Structure> best;
    double best_fitness = 0.0;
    std::size_t evaluations = 0;
    std::vector<double> trace;
    double wall_time_s = 0.0;

    [[nodiscard]] std::string id() const { return key.str() + '|' + std::to_string(run); }
};

inline Dataset dataset_for(const PlannedRun& run)
{
    Rng rng(run.data_seed);
    DataOptions options;
    options.noise.snr_db = run.key.snr_db;
    return make_dataset(run.key.system, options, rng);
}

/// Executes one planned run with the default optimizer settings.
inline RunRecord execute_run(const PlannedRun& run)
{
    const auto start = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.key = run.key;
    rec.run = run.run;
    rec.seed = run.seed;
    rec.data_seed = run.data_seed;

    const auto sys = system_definition(run.key.system);
    FitnessProblem problem(TermDictionary(sys.dictionary), dataset_for(run), run.key.fitness);
    Rng rng(mix_seed(run.seed, 0x5eac4ULL));
    SearchResult result;
    if (run.key.algorithm == Algorithm::upso2d) {
        SwarmConfig cfg;
        cfg.budget = run.budget;
        result = run_2dupso(problem, problem.dimension(), cfg, rng);
    } else {
        GAConfig cfg;
        cfg.budget = run.budget;
        result = run_ga(problem, problem.dimension(), cfg, rng);
    }
    rec.best = result.best;
    rec.best_fitness = result.best_fitness;
    rec.evaluations = result.evaluations;
    rec.trace = std::move(result.trace);
    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

} // namespace narxsel

#endif
