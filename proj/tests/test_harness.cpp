#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "narxsel/exhaustive.hpp"
#include "narxsel/oracle.hpp"
#include "narxsel/runner.hpp"
#include "narxsel/summary.hpp"

using namespace narxsel;
namespace fs = std::filesystem;

namespace
{

ExperimentConfig small_config()
{
    ExperimentConfig cfg;
    cfg.systems = {SystemId::s1};
    cfg.algorithms = {Algorithm::upso2d, Algorithm::ga};
    cfg.fitness = {FitnessSpec::bic()};
    cfg.snr_db = {30.0};
    cfg.runs = 3;
    cfg.budget = 300;
    cfg.base_seed = 99;
    return cfg;
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::path(::testing::TempDir()) / ("narxsel_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> lines_of(const fs::path& path)
{
    std::ifstream in(path);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> encoded(const std::vector<RunRecord>& records)
{
    std::vector<std::string> out;
    for (const auto& r : records)
        out.push_back(encode_record(r, false));
    return out;
}

} // namespace

TEST(Plan, Counts)
{
    auto cfg = small_config();
    cfg.algorithms = {Algorithm::upso2d};
    cfg.runs = 40;
    EXPECT_EQ(plan_runs(cfg).size(), 40U);
    EXPECT_EQ(plan_runs(ExperimentConfig{}).size(), 2400U);
}

TEST(Plan, SeedsUniqueAndStable)
{
    const auto a = plan_runs(ExperimentConfig{});
    const auto b = plan_runs(ExperimentConfig{});
    std::set<std::uint64_t> seeds;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].seed, b[i].seed);
        seeds.insert(a[i].seed);
        ids.insert(a[i].id());
    }
    EXPECT_EQ(seeds.size(), a.size());
    EXPECT_EQ(ids.size(), a.size());
}

TEST(Plan, DataIsPairedAcrossAlgorithmsAndFitness)
{
    auto cfg = small_config();
    cfg.fitness = {FitnessSpec::bic(), FitnessSpec::aic(2)};
    const auto plan = plan_runs(cfg);
    for (const auto& p : plan)
        for (const auto& q : plan) {
            if (p.run == q.run)
                EXPECT_EQ(p.data_seed, q.data_seed);
            else
                EXPECT_NE(p.data_seed, q.data_seed);
        }
    cfg.data_mode = DataMode::fixed;
    const auto fixed = plan_runs(cfg);
    for (const auto& p : fixed)
        EXPECT_EQ(p.data_seed, fixed.front().data_seed);
}

TEST(Config, RoundTripAndErrors)
{
    ExperimentConfig cfg = small_config();
    cfg.snr_db = {50.0, std::nullopt};
    cfg.fitness = {FitnessSpec::aic(2.5), FitnessSpec::bic()};
    cfg.data_mode = DataMode::fixed;
    cfg.output_dir = "out/x";
    const auto text = format_experiment_config(cfg);
    std::istringstream in(text);
    const auto back = parse_experiment_config(in);
    EXPECT_EQ(format_experiment_config(back), text);
    EXPECT_EQ(back.fitness, cfg.fitness);
    EXPECT_EQ(back.snr_db, cfg.snr_db);

    std::istringstream empty("# only a comment\n\n");
    EXPECT_EQ(format_experiment_config(parse_experiment_config(empty)),
              format_experiment_config(ExperimentConfig{}));

    std::istringstream bad_key("colour = blue\n");
    EXPECT_THROW((void)parse_experiment_config(bad_key), std::invalid_argument);
    std::istringstream bad_budget("budget = 10\n");
    EXPECT_THROW((void)parse_experiment_config(bad_budget), std::invalid_argument);
    std::istringstream no_eq("runs 4\n");
    EXPECT_THROW((void)parse_experiment_config(no_eq), std::invalid_argument);
}

TEST(Key, LabelsAndSlug)
{
    const ExperimentKey k{SystemId::s4, Algorithm::ga, FitnessSpec::aic(256), 30.0};
    EXPECT_EQ(k.str(), "S4|ga|AIC:256|30");
    EXPECT_EQ(k.slug(), "S4_ga_AIC256_30dB");
    const ExperimentKey n{SystemId::s1, Algorithm::upso2d, FitnessSpec::bic(), std::nullopt};
    EXPECT_EQ(n.slug(), "S1_2dupso_BIC_noisefree");
}

TEST(Records, TraceCompressionRoundTrip)
{
    const std::vector<double> trace{5, 5, 4, 4, 4, -1.5, -1.5, -2};
    const auto points = compress_trace(trace);
    EXPECT_EQ(points.dump(), "[[1,5.0],[3,4.0],[6,-1.5],[8,-2.0]]");
    EXPECT_EQ(expand_trace(nlohmann::json::parse(points.dump()), trace.size()), trace);
    EXPECT_THROW((void)expand_trace(nlohmann::json::parse("[[2,1.0]]"), 3), std::runtime_error);
    EXPECT_THROW((void)expand_trace(nlohmann::json::parse("[[1,1.0]]"), 0), std::runtime_error);
}

TEST(Records, JsonRoundTrip)
{
    const auto plan = plan_runs(small_config());
    const auto rec = execute_run(plan[1]);
    EXPECT_TRUE(rec.ok);
    const auto back = record_from_json(nlohmann::json::parse(encode_record(rec)));
    EXPECT_EQ(encode_record(back), encode_record(rec));
    EXPECT_EQ(back.trace, rec.trace);
    EXPECT_EQ(back.best, rec.best);

    const auto failed = failed_record(plan[0], "boom");
    const auto fb = record_from_json(nlohmann::json::parse(encode_record(failed)));
    EXPECT_FALSE(fb.ok);
    EXPECT_EQ(fb.error, "boom");
}

TEST(Execute, ReplayIsByteIdentical)
{
    const auto plan = plan_runs(small_config());
    for (const auto& p : plan)
        EXPECT_EQ(encode_record(execute_run(p), false), encode_record(execute_run(p), false));
}

TEST(Execute, SerialAndParallelAgree)
{
    const auto plan = plan_runs(small_config());
    ExecuteOptions serial, parallel;
    parallel.workers = 8;
    const auto a = execute(plan, serial);
    const auto b = execute(plan, parallel);
    EXPECT_EQ(encoded(a), encoded(b));
    for (std::size_t i = 0; i < plan.size(); ++i)
        EXPECT_EQ(a[i].id(), plan[i].id());
}

TEST(Execute, ResumeAfterInterruption)
{
    const auto dir = scratch("resume");
    const auto path = dir / "runs.jsonl";
    const auto plan = plan_runs(small_config());
    ExecuteOptions options;
    options.records_path = path.string();
    options.workers = 2;
    const auto full = execute(plan, options);
    auto lines = lines_of(path);
    ASSERT_EQ(lines.size(), plan.size());

    // Keep two complete records and half of a third, as after a kill.
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << lines[0] << '\n' << lines[1] << '\n' << lines[2].substr(0, lines[2].size() / 2);
    }
    std::size_t executed = 0;
    options.on_record = [&](const RunRecord&, std::size_t, std::size_t) { ++executed; };
    const auto resumed = execute(plan, options);
    EXPECT_EQ(executed, plan.size() - 2);
    EXPECT_EQ(encoded(resumed), encoded(full));

    lines = lines_of(path);
    EXPECT_EQ(lines.size(), plan.size());
    std::set<std::string> ids;
    for (const auto& r : load_records(path.string()))
        ids.insert(r.id());
    EXPECT_EQ(ids.size(), plan.size());

    executed = 0;
    (void)execute(plan, options);
    EXPECT_EQ(executed, 0U);
    EXPECT_EQ(lines_of(path).size(), plan.size());
}

TEST(Execute, FailingRunIsIsolated)
{
    const auto plan = plan_runs(small_config());
    const auto victim = plan[2].id();
    auto runner = [&](const PlannedRun& p) {
        if (p.id() == victim)
            throw std::runtime_error("engineered failure");
        return execute_run(p);
    };
    ExecuteOptions options;
    options.workers = 3;
    const auto records = execute(plan, options, runner);
    ASSERT_EQ(records.size(), plan.size());
    std::size_t failed = 0;
    for (const auto& r : records)
        if (!r.ok) {
            ++failed;
            EXPECT_EQ(r.id(), victim);
            EXPECT_EQ(r.error, "engineered failure");
        }
    EXPECT_EQ(failed, 1U);

    const auto summary = summarize(records, 3);
    for (const auto& s : summary)
        if (s.key.str() + "|2" == victim || s.key.str() + "|1" == victim ||
            s.key.str() + "|0" == victim) {
            EXPECT_EQ(s.failed_runs, 1U);
            EXPECT_EQ(s.runs, 2U);
            EXPECT_FALSE(s.complete());
        }
}

TEST(Summary, RecomputableAndByteIdentical)
{
    const auto plan = plan_runs(small_config());
    const auto records = execute(plan, {});
    const auto a = scratch("summary_a");
    const auto b = scratch("summary_b");
    write_summaries(a.string(), summarize(records, 3));
    write_summaries(b.string(), summarize(records, 3));
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        ++files;
        EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename()))
            << entry.path().filename();
    }
    EXPECT_EQ(files, 1U + 2U * 3U);

    const auto all = summarize(records, 3);
    ASSERT_EQ(all.size(), 2U);
    for (const auto& s : all) {
        EXPECT_TRUE(s.complete());
        std::vector<Structure> finals;
        double sum = 0.0;
        for (const auto& r : records)
            if (r.key == s.key) {
                finals.push_back(*r.best);
                sum += r.best_fitness;
            }
        const auto t = selection_frequency(finals, 66);
        EXPECT_EQ(t.counts, s.table.counts);
        EXPECT_DOUBLE_EQ(s.mean_final_best, sum / 3.0);
        // The GA stops after whole generations: 80 + 2 * 78 evaluations.
        ASSERT_EQ(s.mean_trace.size(), s.key.algorithm == Algorithm::ga ? 236U : 300U);
        EXPECT_LE(s.mean_trace.back(), s.mean_trace.front());
    }
    std::ifstream conv(a / (all.front().key.slug() + "_convergence.csv"));
    std::string header;
    std::getline(conv, header);
    EXPECT_EQ(header, "fe,mean_best_fitness,algorithm");
}

TEST(Summary, IncompleteKeyReported)
{
    const auto plan = plan_runs(small_config());
    std::vector<RunRecord> records{execute_run(plan[0])};
    const auto all = summarize(records, 3);
    ASSERT_EQ(all.size(), 1U);
    EXPECT_EQ(all[0].runs, 1U);
    EXPECT_FALSE(all[0].complete());
    EXPECT_FALSE(summary_json(all[0])["complete"].get<bool>());
}

TEST(Exhaustive, PopcountFirstMinimizer)
{
    auto popcount = [](const Structure& s) { return static_cast<double>(s.cardinality()); };
    const auto r = exhaustive_search(popcount, 10);
    EXPECT_EQ(r.evaluated, 1023U);
    EXPECT_EQ(r.best, Structure::from_indices(10, {0}));
    EXPECT_EQ(r.ties, 9U);
    EXPECT_THROW((void)exhaustive_search(popcount, 0), std::invalid_argument);
    EXPECT_THROW((void)exhaustive_search(popcount, 40), std::invalid_argument);
}

TEST(Exhaustive, ReducedProblemRecoversTruth)
{
    ReducedProblemSpec spec;
    spec.dictionary = {1, 1, 0, 2};
    spec.n = 300;
    spec.validation_length = 100;
    const auto r = run_oracle(spec);
    const auto problem = reduced_problem(spec);
    EXPECT_EQ(r.evaluated, 63U);
    EXPECT_EQ(r.best, system_definition(SystemId::s1).true_structure(problem.dictionary()));

    spec.system = SystemId::s4;
    EXPECT_THROW((void)reduced_problem(spec), std::invalid_argument);
}
