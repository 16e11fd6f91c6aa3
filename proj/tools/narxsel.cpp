// narxsel: data generation, sweep execution, summaries and exhaustive oracle.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "narxsel/narxsel.hpp"

namespace fs = std::filesystem;
using namespace narxsel;

namespace
{

struct Common
{
    std::string config;
    std::size_t workers = 0;
    std::string out;
    std::optional<std::uint64_t> seed;
};

ExperimentConfig resolve_config(const Common& c)
{
    ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_experiment_config(c.config);
    if (!c.out.empty())
        cfg.output_dir = c.out;
    if (c.seed)
        cfg.base_seed = *c.seed;
    cfg.validate();
    return cfg;
}

std::size_t worker_count(std::size_t requested)
{
    if (requested > 0)
        return requested;
    return std::max(1U, std::thread::hardware_concurrency());
}

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config, "experiment config file")->check(CLI::ExistingFile);
    app->add_option("--workers", c.workers, "worker threads (0 = all cores)");
    app->add_option("--out", c.out, "output directory (overrides output_dir)");
    app->add_option("--seed", c.seed, "base seed (overrides base_seed)");
}

int cmd_gen_data(const Common& c, std::size_t n)
{
    const auto cfg = resolve_config(c);
    fs::create_directories(cfg.output_dir);
    for (auto sys : cfg.systems)
        for (const auto& snr : cfg.snr_db) {
            // Same seeding as a fixed-mode sweep, so the files match run data.
            const auto seed = mix_seed(
                cfg.base_seed, fnv1a64("data|" + to_string(sys) + '|' + snr_label(snr)));
            Rng rng(seed);
            DataOptions options;
            options.n = n;
            options.noise.snr_db = snr;
            const auto data = make_dataset(sys, options, rng);
            const auto name = to_string(sys) + '_' + (snr ? snr_label(snr) + "dB" : "noisefree");
            const auto path = fs::path(cfg.output_dir) / (name + ".csv");
            std::ofstream f(path, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write " + path.string());
            write_dataset_csv(f, data);
            std::cout << path.string() << "  n=" << data.u.size()
                      << " split=" << data.split_index << '\n';
        }
    return 0;
}

int cmd_run(const Common& c)
{
    const auto cfg = resolve_config(c);
    fs::create_directories(cfg.output_dir);
    {
        std::ofstream f(fs::path(cfg.output_dir) / "config.txt", std::ios::binary);
        f << format_experiment_config(cfg);
    }
    const auto plan = plan_runs(cfg);
    ExecuteOptions options;
    options.workers = worker_count(c.workers);
    options.records_path = (fs::path(cfg.output_dir) / "runs.jsonl").string();
    options.on_record = [](const RunRecord& r, std::size_t done, std::size_t total) {
        std::fprintf(stderr, "[%zu/%zu] %s %s\n", done, total, r.id().c_str(),
                     r.ok ? "ok" : ("FAILED: " + r.error).c_str());
    };
    std::fprintf(stderr, "%zu planned runs, %zu workers\n", plan.size(), options.workers);
    const auto records = execute(plan, options);

    std::size_t failed = 0;
    for (const auto& r : records)
        failed += r.ok ? 0 : 1;
    write_summaries((fs::path(cfg.output_dir) / "summary").string(),
                    summarize(records, cfg.runs));
    std::fprintf(stderr, "%zu runs, %zu failed\n", records.size(), failed);
    return failed == 0 ? 0 : 1;
}

int cmd_summarize(const Common& c, std::string records_path, std::optional<std::size_t> runs,
                  double threshold)
{
    std::optional<ExperimentConfig> cfg;
    if (!c.config.empty() || !c.out.empty())
        cfg = resolve_config(c);
    if (records_path.empty()) {
        if (!cfg)
            throw std::invalid_argument("need --records, --out or --config");
        records_path = (fs::path(cfg->output_dir) / "runs.jsonl").string();
    }
    if (!runs && cfg && !c.config.empty())
        runs = cfg->runs;
    const auto records = load_records(records_path, false);
    const auto dir = cfg ? (fs::path(cfg->output_dir) / "summary")
                         : fs::path(records_path).parent_path() / "summary";
    const auto all = summarize(records, runs, threshold);
    write_summaries(dir.string(), all);
    std::ifstream table(dir / "summary.csv");
    std::cout << table.rdbuf();
    bool complete = true;
    for (const auto& s : all)
        complete = complete && s.complete() && s.failed_runs == 0;
    return complete ? 0 : 1;
}

struct OracleArgs
{
    std::string system = "S1";
    int ny = 2, nu = 2, degree = 2;
    std::size_t n = 667, validation = 200;
    std::string snr = "none";
    std::string fitness = "BIC";
    std::size_t compare_runs = 0;
    std::size_t budget = 6000;
};

int cmd_oracle(const Common& c, const OracleArgs& a)
{
    ReducedProblemSpec spec;
    spec.system = parse_system_id(a.system);
    spec.dictionary = {a.ny, a.nu, 0, a.degree};
    spec.n = a.n;
    spec.validation_length = a.validation;
    spec.snr_db = parse_snr(a.snr);
    spec.fitness = parse_fitness_spec(a.fitness);
    if (c.seed)
        spec.seed = *c.seed;

    auto problem = reduced_problem(spec);
    const auto& dict = problem.dictionary();
    const auto result = exhaustive_search(problem, problem.dimension());
    const auto truth = system_definition(spec.system).true_structure(dict);

    nlohmann::ordered_json j;
    j["system"] = to_string(spec.system);
    j["n_terms"] = dict.size();
    j["fitness"] = spec.fitness.label();
    j["snr_db"] = snr_label(spec.snr_db);
    j["evaluated"] = result.evaluated;
    j["best_fitness"] = result.best_fitness;
    j["ties"] = result.ties;
    auto terms = nlohmann::ordered_json::array();
    for (auto i : result.best.indices())
        terms.push_back(dict[i].render());
    j["best_structure"] = terms;
    j["best_is_true_structure"] = result.best == truth;
    j["true_structure_fitness"] = problem(truth);

    int status = 0;
    if (a.compare_runs > 0) {
        std::size_t hits = 0, below = 0;
        for (std::size_t r = 0; r < a.compare_runs; ++r) {
            Rng rng(mix_seed(spec.seed, fnv1a64("oracle-run|" + std::to_string(r))));
            SwarmConfig cfg;
            cfg.budget = a.budget;
            const auto res = run_2dupso(problem, problem.dimension(), cfg, rng);
            hits += res.best == result.best ? 1 : 0;
            below += res.best_fitness < result.best_fitness ? 1 : 0;
        }
        j["swarm_runs"] = a.compare_runs;
        j["swarm_hits"] = hits;
        j["swarm_below_optimum"] = below;
        status = below == 0 ? 0 : 1;
    }
    const auto text = j.dump(2);
    std::cout << text << '\n';
    if (!c.out.empty()) {
        fs::create_directories(c.out);
        std::ofstream(fs::path(c.out) / "oracle.json", std::ios::binary) << text << '\n';
    }
    return status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Polynomial NARX structure selection experiments"};
    app.require_subcommand(1);

    Common common;
    auto* gen = app.add_subcommand("gen-data", "write benchmark datasets as CSV");
    add_common(gen, common);
    std::size_t n = 2000;
    gen->add_option("--n", n, "samples per dataset");

    auto* run = app.add_subcommand("run", "execute a sweep and summarize it");
    add_common(run, common);

    auto* summ = app.add_subcommand("summarize", "aggregate run records");
    add_common(summ, common);
    std::string records_path;
    std::optional<std::size_t> runs;
    double threshold = 0.9;
    summ->add_option("--records", records_path, "runs.jsonl to read")->check(CLI::ExistingFile);
    summ->add_option("--runs", runs, "expected runs per experiment");
    summ->add_option("--threshold", threshold, "structure extraction threshold");

    auto* oracle = app.add_subcommand("oracle", "exhaustive search on a reduced dictionary");
    add_common(oracle, common);
    OracleArgs oa;
    oracle->add_option("--system", oa.system);
    oracle->add_option("--ny", oa.ny);
    oracle->add_option("--nu", oa.nu);
    oracle->add_option("--degree", oa.degree);
    oracle->add_option("--n", oa.n, "samples");
    oracle->add_option("--validation", oa.validation, "validation samples");
    oracle->add_option("--snr", oa.snr, "dB or 'none'");
    oracle->add_option("--fitness", oa.fitness, "BIC or AIC:<varrho>");
    oracle->add_option("--compare-runs", oa.compare_runs, "2D-UPSO runs to check against");
    oracle->add_option("--budget", oa.budget, "evaluations per 2D-UPSO run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen)
            return cmd_gen_data(common, n);
        if (*run)
            return cmd_run(common);
        if (*summ)
            return cmd_summarize(common, records_path, runs, threshold);
        if (*oracle)
            return cmd_oracle(common, oa);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
