#ifndef NARXSEL_RUNNER_HPP
#define NARXSEL_RUNNER_HPP

/** @file
 * Parallel sweep execution with append-only, resumable persistence.
 */

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "experiment.hpp"
#include "records.hpp"

namespace narxsel
{

struct ExecuteOptions
{
    std::size_t workers = 1;
    /// JSON-lines file; empty disables persistence and resumption.
    std::string records_path;
    std::function<void(const RunRecord&, std::size_t done, std::size_t total)> on_record;
};

using RunFunction = std::function<RunRecord(const PlannedRun&)>;

/// A run that threw becomes a failed record carrying the message.
inline RunRecord failed_record(const PlannedRun& run, const std::string& message)
{
    RunRecord rec;
    rec.key = run.key;
    rec.run = run.run;
    rec.seed = run.seed;
    rec.data_seed = run.data_seed;
    rec.ok = false;
    rec.error = message;
    return rec;
}

/**
 * Runs every planned run not already present in the records file.  Workers
 * pull runs from a shared counter; finished records pass through a single
 * locked writer.  The returned records follow plan order whatever the
 * scheduling, and include those recovered from an earlier session.
 */
inline std::vector<RunRecord> execute(const std::vector<PlannedRun>& plan,
                                      const ExecuteOptions& options,
                                      const RunFunction& runner = execute_run)
{
    if (plan.empty())
        throw std::invalid_argument("nothing to execute: empty plan");

    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < plan.size(); ++i)
        slot.emplace(plan[i].id(), i);

    std::vector<std::optional<RunRecord>> results(plan.size());
    std::ofstream sink;
    if (!options.records_path.empty()) {
        const std::filesystem::path path(options.records_path);
        if (path.has_parent_path())
            std::filesystem::create_directories(path.parent_path());
        for (auto& rec : load_records(options.records_path, true))
            if (auto it = slot.find(rec.id()); it != slot.end() && !results[it->second])
                results[it->second] = std::move(rec);
        sink.open(options.records_path, std::ios::app | std::ios::binary);
        if (!sink)
            throw std::runtime_error("cannot open " + options.records_path + " for appending");
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < plan.size(); ++i)
        if (!results[i])
            pending.push_back(i);

    std::atomic<std::size_t> next{0};
    std::mutex writer;
    std::size_t done = plan.size() - pending.size();

    auto work = [&] {
        for (;;) {
            const auto n = next.fetch_add(1);
            if (n >= pending.size())
                return;
            const auto& run = plan[pending[n]];
            RunRecord rec;
            try {
                rec = runner(run);
            } catch (const std::exception& e) {
                rec = failed_record(run, e.what());
            } catch (...) {
                rec = failed_record(run, "unknown error");
            }
            std::lock_guard lock(writer);
            if (sink.is_open()) {
                sink << encode_record(rec) << '\n';
                sink.flush();
            }
            ++done;
            if (options.on_record)
                options.on_record(rec, done, plan.size());
            results[pending[n]] = std::move(rec);
        }
    };

    const auto workers = std::max<std::size_t>(1, std::min(options.workers, pending.size()));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }

    std::vector<RunRecord> out;
    out.reserve(plan.size());
    for (auto& r : results)
        out.push_back(std::move(*r));
    return out;
}

} // namespace narxsel

#endif
