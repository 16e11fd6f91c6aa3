#ifndef NARXSEL_SYSTEMS_HPP
#define NARXSEL_SYSTEMS_HPP

/** @file
 * The four benchmark systems and synthetic data generation.
 */

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dataset.hpp"
#include "dictionary.hpp"
#include "random.hpp"
#include "structure.hpp"

namespace narxsel
{

enum class SystemId { s1, s2, s3, s4 };

inline constexpr std::array<SystemId, 4> all_systems{SystemId::s1, SystemId::s2, SystemId::s3,
                                                     SystemId::s4};

inline std::string to_string(SystemId id)
{
    switch (id) {
    case SystemId::s1: return "S1";
    case SystemId::s2: return "S2";
    case SystemId::s3: return "S3";
    case SystemId::s4: return "S4";
    }
    return "?";
}

inline SystemId parse_system_id(std::string_view text)
{
    for (auto id : all_systems) {
        const auto name = to_string(id);
        if (text.size() == 2 && (text[0] == 'S' || text[0] == 's') && text[1] == name[1])
            return id;
    }
    throw std::invalid_argument("unknown system '" + std::string(text) + "'");
}

struct SystemTerm
{
    Term term;
    double coefficient;
};

/**
 * A benchmark system: its candidate dictionary and its true terms with
 * coefficients.  `terms` keeps the conventional T1..Tn reporting order,
 * which is not the dictionary order.
 */
struct SystemDefinition
{
    SystemId id;
    DictionaryConfig dictionary;
    std::vector<SystemTerm> terms;

    [[nodiscard]] std::string name() const { return to_string(id); }

    [[nodiscard]] int max_lag() const
    {
        int lag = 0;
        for (const auto& t : terms)
            lag = std::max(lag, t.term.max_lag());
        return lag;
    }

    /// Dictionary indices of the true terms, in T1..Tn order.
    [[nodiscard]] std::vector<std::size_t> term_indices(const TermDictionary& dict) const
    {
        std::vector<std::size_t> out;
        for (const auto& t : terms)
            out.push_back(dict.index_of(t.term));
        return out;
    }

    [[nodiscard]] Structure true_structure(const TermDictionary& dict) const
    {
        return Structure::from_indices(dict.size(), term_indices(dict));
    }

    /// Coefficients aligned with the dictionary order of true_structure().
    [[nodiscard]] std::vector<double> true_theta(const TermDictionary& dict) const
    {
        const auto s = true_structure(dict);
        std::vector<double> theta;
        for (auto i : s.indices())
            for (const auto& t : terms)
                if (dict[i] == t.term)
                    theta.push_back(t.coefficient);
        return theta;
    }
};

inline SystemDefinition system_definition(SystemId id)
{
    const Term one;
    switch (id) {
    case SystemId::s1:
        return {id, {5, 5, 0, 2},
                {{y_(1), 0.5}, {u_(1), 0.3}, {u_(1) * y_(1), 0.3}, {u_(1) * u_(1), 0.5}}};
    case SystemId::s2:
        return {id, {5, 5, 0, 2},
                {{one, 0.5},
                 {y_(1), 0.5},
                 {u_(2), 0.8},
                 {y_(2) * y_(2), -0.05},
                 {u_(1) * u_(1), 1.0}}};
    case SystemId::s3:
        return {id, {3, 3, 0, 3},
                {{y_(1), 0.8},
                 {u_(1), 0.4},
                 {u_(1) * u_(1), 0.4},
                 {u_(1) * u_(1) * u_(1), 0.4}}};
    case SystemId::s4:
        return {id, {5, 5, 0, 2},
                {{u_(1), 0.8833},
                 {u_(2), 0.0393},
                 {u_(3), 0.8546},
                 {u_(1) * u_(1), 0.8528},
                 {u_(1) * u_(2), 0.7582},
                 {u_(1) * u_(3), 0.1750},
                 {u_(2) * u_(2), 0.0864},
                 {u_(2) * u_(3), 0.4916},
                 {u_(3) * u_(3), 0.0711},
                 {y_(1), -0.0375},
                 {y_(2), -0.0598},
                 {y_(3), -0.0370},
                 {y_(4), -0.0468},
                 {y_(1) * y_(1), -0.0476},
                 {y_(1) * y_(2), -0.0781},
                 {y_(1) * y_(3), -0.0189},
                 {y_(1) * y_(4), -0.0626},
                 {y_(2) * y_(2), -0.0221},
                 {y_(2) * y_(3), -0.0617},
                 {y_(2) * y_(4), -0.0378},
                 {y_(3) * y_(3), -0.0041},
                 {y_(3) * y_(4), -0.0543},
                 {y_(4) * y_(4), -0.0603}}};
    }
    throw std::invalid_argument("unknown system");
}

/// i.i.d. Uniform[-amplitude, amplitude] excitation.
inline std::vector<double> generate_input(std::size_t n, double amplitude, Rng& rng)
{
    if (n == 0)
        throw std::invalid_argument("input length must be positive");
    if (!(amplitude > 0.0))
        throw std::invalid_argument("input amplitude must be positive");
    std::vector<double> u(n);
    for (auto& v : u)
        v = rng.uniform(-amplitude, amplitude);
    return u;
}

/**
 * Noise-free response of the system to `u`, from zero initial conditions:
 * samples before k = 0 are taken as zero.
 */
inline std::vector<double> simulate_system(const SystemDefinition& sys,
                                           const std::vector<double>& u)
{
    const auto lag = static_cast<std::size_t>(sys.max_lag());
    if (u.size() < lag + 1)
        throw std::invalid_argument("input shorter than the system memory");
    // Zero-padded copies so every lag lookup is in range.
    std::vector<double> up(lag, 0.0), yp(lag + u.size(), 0.0);
    up.insert(up.end(), u.begin(), u.end());
    std::vector<double> y(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        const std::size_t kp = k + lag;
        double v = 0.0;
        for (const auto& t : sys.terms)
            v += t.coefficient * term_value(t.term, up, yp, kp);
        if (!std::isfinite(v))
            throw std::runtime_error(sys.name() + " output became non-finite at sample " +
                                     std::to_string(k));
        yp[kp] = v;
        y[k] = v;
    }
    return y;
}

inline std::vector<double> simulate_system(SystemId id, const std::vector<double>& u)
{
    return simulate_system(system_definition(id), u);
}

/// Measurement-noise level; no value means noise-free.
struct NoiseSpec
{
    std::optional<double> snr_db;
};

/// Adds zero-mean Gaussian noise of variance mean(y^2) / 10^(snr/10).
inline std::vector<double> add_measurement_noise(const std::vector<double>& y,
                                                 const NoiseSpec& spec, Rng& rng)
{
    if (!spec.snr_db)
        return y;
    if (y.empty())
        return y;
    double power = 0.0;
    for (double v : y) {
        if (!std::isfinite(v))
            throw std::invalid_argument("cannot add noise to a non-finite series");
        power += v * v;
    }
    power /= static_cast<double>(y.size());
    const double sigma = std::sqrt(power / std::pow(10.0, *spec.snr_db / 10.0));
    std::vector<double> out(y);
    for (auto& v : out)
        v += sigma * rng.normal();
    return out;
}

struct DataOptions
{
    std::size_t n = 2000;
    /// Validation samples; 0 means 30% of n.
    std::size_t validation_length = 0;
    double amplitude = 1.0;
    /// Leading samples simulated and then dropped.
    std::size_t transient = 0;
    NoiseSpec noise;

    [[nodiscard]] std::size_t resolved_validation_length() const
    {
        if (validation_length)
            return validation_length;
        return static_cast<std::size_t>(std::llround(0.3 * static_cast<double>(n)));
    }
};

/// Synthesizes a dataset.  Input and noise use separate sub-streams of `rng`.
inline Dataset make_dataset(const SystemDefinition& sys, const DataOptions& options, Rng& rng)
{
    const auto L = options.resolved_validation_length();
    if (L == 0 || L >= options.n)
        throw std::invalid_argument("validation length must satisfy 0 < L < n");
    Rng input_rng(rng());
    Rng noise_rng(rng());
    auto u = generate_input(options.n + options.transient, options.amplitude, input_rng);
    auto y = simulate_system(sys, u);
    u.erase(u.begin(), u.begin() + static_cast<long>(options.transient));
    y.erase(y.begin(), y.begin() + static_cast<long>(options.transient));
    Dataset data;
    data.y = add_measurement_noise(y, options.noise, noise_rng);
    data.u = std::move(u);
    data.split_index = options.n - L;
    data.snr_db = options.noise.snr_db;
    return data;
}

inline Dataset make_dataset(SystemId id, const DataOptions& options, Rng& rng)
{
    return make_dataset(system_definition(id), options, rng);
}

} // namespace narxsel

#endif
