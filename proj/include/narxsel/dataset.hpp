#ifndef NARXSEL_DATASET_HPP
#define NARXSEL_DATASET_HPP

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace narxsel
{

/// Half-open sample interval [begin, end).
struct SampleRange
{
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const { return end > begin ? end - begin : 0; }
};

/**
 * Synchronized input/output record.  Samples [0, split_index) form the
 * estimation segment, [split_index, N) the validation segment.
 */
struct Dataset
{
    std::vector<double> u;
    std::vector<double> y;
    std::size_t split_index = 0;
    std::optional<double> snr_db;

    [[nodiscard]] std::size_t size() const { return y.size(); }
    [[nodiscard]] std::size_t validation_length() const { return y.size() - split_index; }

    /// Estimation rows for a dictionary whose regressors reach back max_lag samples.
    [[nodiscard]] SampleRange estimation_range(int max_lag) const
    {
        return {static_cast<std::size_t>(max_lag), split_index};
    }
    [[nodiscard]] SampleRange validation_range() const { return {split_index, y.size()}; }

    void validate() const
    {
        if (u.size() != y.size())
            throw std::invalid_argument("input and output series differ in length");
        if (split_index == 0 || split_index >= y.size())
            throw std::invalid_argument("split index must satisfy 0 < split < N");
    }
};

namespace detail
{
inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& text)
{
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw std::runtime_error("malformed number '" + text + "'");
    return v;
}
} // namespace detail

/// CSV with header `k,u,y`; 17 significant digits round-trip doubles exactly.
inline void write_dataset_csv(std::ostream& out, const Dataset& data)
{
    out << "k,u,y\n";
    for (std::size_t k = 0; k < data.size(); ++k)
        out << k << ',' << detail::format_double(data.u[k]) << ','
            << detail::format_double(data.y[k]) << '\n';
}

inline void write_dataset_csv(const std::string& path, const Dataset& data)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    write_dataset_csv(out, data);
}

/// Reads `k,u,y` rows.  The split is not stored in the file; the caller sets it.
inline Dataset read_dataset_csv(std::istream& in, std::size_t split_index = 0)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("k,u,y", 0) != 0)
        throw std::runtime_error("dataset CSV must start with header k,u,y");
    Dataset data;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string k, u, y;
        if (!std::getline(fields, k, ',') || !std::getline(fields, u, ',') ||
            !std::getline(fields, y))
            throw std::runtime_error("malformed dataset row " + std::to_string(row));
        if (std::stoull(k) != row)
            throw std::runtime_error("dataset rows out of order at " + std::to_string(row));
        data.u.push_back(detail::parse_double(u));
        data.y.push_back(detail::parse_double(y));
        ++row;
    }
    data.split_index = split_index;
    return data;
}

inline Dataset read_dataset_csv(const std::string& path, std::size_t split_index = 0)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return read_dataset_csv(in, split_index);
}

} // namespace narxsel

#endif
