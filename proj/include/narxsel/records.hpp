#ifndef NARXSEL_RECORDS_HPP
#define NARXSEL_RECORDS_HPP

/** @file
 * JSON-lines persistence of run records.
 *
 * One object per line.  The best-so-far trace is stored as its change
 * points `[[fe, value], ...]` (fe is 1-based); expanding them over
 * `evaluations` entries restores the per-evaluation trace exactly.
 */

#include <filesystem>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "experiment.hpp"

namespace narxsel
{

using ordered_json = nlohmann::ordered_json;

inline ordered_json compress_trace(const std::vector<double>& trace)
{
    ordered_json points = ordered_json::array();
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (i == 0 || trace[i] != trace[i - 1])
            points.push_back(ordered_json::array({i + 1, trace[i]}));
    return points;
}

inline std::vector<double> expand_trace(const nlohmann::json& points, std::size_t length)
{
    std::vector<double> trace;
    trace.reserve(length);
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto fe = points[p][0].get<std::size_t>();
        const double value = points[p][1].get<double>();
        const auto next = p + 1 < points.size() ? points[p + 1][0].get<std::size_t>() : length + 1;
        if (fe != trace.size() + 1 || next <= fe || next > length + 1)
            throw std::runtime_error("malformed trace change points");
        trace.insert(trace.end(), next - fe, value);
    }
    if (trace.size() != length)
        throw std::runtime_error("trace does not cover every evaluation");
    return trace;
}

inline ordered_json to_json(const RunRecord& r, bool include_wall_time = true)
{
    ordered_json j;
    j["system"] = to_string(r.key.system);
    j["algorithm"] = to_string(r.key.algorithm);
    j["fitness"] = r.key.fitness.label();
    j["snr_db"] = r.key.snr_db ? ordered_json(*r.key.snr_db) : ordered_json(nullptr);
    j["run"] = r.run;
    j["seed"] = r.seed;
    j["data_seed"] = r.data_seed;
    j["status"] = r.ok ? "ok" : "failed";
    if (!r.ok)
        j["error"] = r.error;
    if (r.best) {
        j["best_structure"] = r.best->to_string();
        j["best_terms"] = r.best->indices();
    }
    j["best_fitness"] = r.best_fitness;
    j["evaluations"] = r.evaluations;
    j["trace"] = compress_trace(r.trace);
    if (include_wall_time)
        j["wall_time_s"] = r.wall_time_s;
    return j;
}

inline RunRecord record_from_json(const nlohmann::json& j)
{
    RunRecord r;
    r.key.system = parse_system_id(j.at("system").get<std::string>());
    r.key.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    r.key.fitness = parse_fitness_spec(j.at("fitness").get<std::string>());
    if (!j.at("snr_db").is_null())
        r.key.snr_db = j.at("snr_db").get<double>();
    r.run = j.at("run").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.data_seed = j.value("data_seed", std::uint64_t{0});
    r.ok = j.at("status").get<std::string>() == "ok";
    r.error = j.value("error", std::string{});
    if (j.contains("best_structure"))
        r.best = Structure::from_string(j.at("best_structure").get<std::string>());
    r.best_fitness = j.at("best_fitness").get<double>();
    r.evaluations = j.at("evaluations").get<std::size_t>();
    r.trace = expand_trace(j.at("trace"), r.evaluations);
    r.wall_time_s = j.value("wall_time_s", 0.0);
    return r;
}

/// Canonical one-line encoding.
inline std::string encode_record(const RunRecord& r, bool include_wall_time = true)
{
    return to_json(r, include_wall_time).dump();
}

/**
 * Reads every complete line of a JSON-lines file.  A trailing partial line
 * (an interrupted write) is ignored; with `repair` the file is truncated
 * back to its last complete line so appends stay well-formed.
 */
inline std::vector<RunRecord> load_records(const std::string& path, bool repair = false)
{
    std::vector<RunRecord> out;
    if (!std::filesystem::exists(path))
        return out;
    std::string content;
    {
        std::ifstream in(path, std::ios::binary);
        content.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    const auto last_newline = content.rfind('\n');
    const std::size_t complete = last_newline == std::string::npos ? 0 : last_newline + 1;
    if (repair && complete != content.size())
        std::filesystem::resize_file(path, complete);
    std::size_t pos = 0;
    while (pos < complete) {
        const auto nl = content.find('\n', pos);
        const auto line = content.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.empty())
            continue;
        out.push_back(record_from_json(nlohmann::json::parse(line)));
    }
    return out;
}

} // namespace narxsel

#endif
