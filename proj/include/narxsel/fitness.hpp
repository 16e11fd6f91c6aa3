#ifndef NARXSEL_FITNESS_HPP
#define NARXSEL_FITNESS_HPP

/** @file
 * Information-criterion fitness of candidate structures.
 *
 * A structure is scored by fitting its coefficients on the estimation
 * segment, simulating the validation segment and penalizing cardinality:
 *
 *   BIC:  J = L ln(e) + ln(L) xi
 *   AIC:  J = L ln(e) + varrho xi
 *
 * where e is the validation sum of squared errors and L the number of
 * validation samples.  Lower is better.
 */

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "dataset.hpp"
#include "dictionary.hpp"
#include "regression.hpp"
#include "structure.hpp"

namespace narxsel
{

enum class Criterion { bic, aic };
enum class PredictionMode { free_run, one_step };

/// Fitness assigned to structures whose simulation diverges.
inline constexpr double divergence_penalty = 1e12;
/// Absolute floor on e before the logarithm.
inline constexpr double absolute_error_floor = 1e-300;

struct FitnessSpec
{
    Criterion kind = Criterion::bic;
    double varrho = 2.0;
    PredictionMode mode = PredictionMode::free_run;
    /// e is also floored at this fraction of the validation output energy;
    /// 0 leaves only absolute_error_floor.
    double relative_error_floor = std::numeric_limits<double>::epsilon();

    static FitnessSpec bic() { return {}; }
    static FitnessSpec aic(double varrho)
    {
        FitnessSpec s;
        s.kind = Criterion::aic;
        s.varrho = varrho;
        return s;
    }

    void validate() const
    {
        if (kind == Criterion::aic && !(varrho > 0.0))
            throw std::invalid_argument("AIC penalty weight must be positive");
        if (!(relative_error_floor >= 0.0))
            throw std::invalid_argument("relative error floor must be non-negative");
    }

    /// `BIC` or `AIC:<varrho>`.
    [[nodiscard]] std::string label() const
    {
        if (kind == Criterion::bic)
            return "BIC";
        return "AIC:" + detail::format_double(varrho);
    }

    friend bool operator==(const FitnessSpec&, const FitnessSpec&) = default;
};

/// Parses `BIC`, `AIC:<varrho>` (case-insensitive prefix).
inline FitnessSpec parse_fitness_spec(const std::string& text)
{
    std::string upper;
    for (char c : text)
        upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper == "BIC")
        return FitnessSpec::bic();
    if (upper.rfind("AIC:", 0) == 0 || upper.rfind("AIC=", 0) == 0) {
        auto spec = FitnessSpec::aic(detail::parse_double(text.substr(4)));
        spec.validate();
        return spec;
    }
    throw std::invalid_argument("unknown fitness '" + text + "' (expected BIC or AIC:<varrho>)");
}

/// Sum of squared residuals.
inline double sse(std::span<const double> y, std::span<const double> yhat)
{
    if (y.size() != yhat.size())
        throw std::invalid_argument("sse: series lengths differ");
    double e = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double r = y[k] - yhat[k];
        e += r * r;
    }
    return e;
}

/// Criterion value for a given error energy; no flooring.
inline double information_criterion(double e, std::size_t L, std::size_t xi,
                                    const FitnessSpec& spec)
{
    const double penalty =
        spec.kind == Criterion::bic ? std::log(static_cast<double>(L)) : spec.varrho;
    return static_cast<double>(L) * std::log(e) + penalty * static_cast<double>(xi);
}

namespace detail
{
inline double error_floor(std::span<const double> y_val, const FitnessSpec& spec)
{
    double energy = 0.0;
    for (double v : y_val)
        energy += v * v;
    return std::max(absolute_error_floor, spec.relative_error_floor * energy);
}

inline double score(const Prediction& p, std::span<const double> y_val, std::size_t xi,
                    const FitnessSpec& spec, double floor)
{
    if (p.diverged || p.yhat.size() != y_val.size())
        return divergence_penalty;
    double e = sse(y_val, p.yhat);
    if (!std::isfinite(e))
        return divergence_penalty;
    e = std::max(e, floor);
    return information_criterion(e, y_val.size(), xi, spec);
}
} // namespace detail

/**
 * Scores one structure from scratch.  Coefficients come from one-step
 * regressors on the estimation segment; e is measured on the validation
 * segment, by free-run simulation unless spec.mode says otherwise.
 */
inline double evaluate_fitness(const Structure& s, const TermDictionary& dict,
                               const Dataset& data, const FitnessSpec& spec)
{
    data.validate();
    const auto model = estimate_model(dict, s, data);
    const auto range = data.validation_range();
    const auto prediction = spec.mode == PredictionMode::free_run
                                ? simulate_free_run(dict, model, data, range)
                                : predict_one_step(dict, model, data, range);
    const std::span<const double> y_val(data.y.data() + range.begin, range.size());
    return detail::score(prediction, y_val, s.cardinality(), spec,
                         detail::error_floor(y_val, spec));
}

/**
 * Fitness oracle bound to one dictionary and dataset.  Caches every
 * dictionary column over the estimation segment and memoizes scores by
 * structure; results are bit-identical to evaluate_fitness.
 */
class FitnessProblem
{
public:
    FitnessProblem(TermDictionary dict, Dataset data, FitnessSpec spec, bool memoize = true)
        : dict_(std::move(dict)), data_(std::move(data)), spec_(spec), memoize_(memoize)
    {
        data_.validate();
        spec_.validate();
        const auto range = data_.estimation_range(dict_.max_lag());
        check_range(dict_, data_, range);
        std::vector<std::size_t> all(dict_.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            all[i] = i;
        const CompiledTerms terms(dict_, all);
        columns_.resize(static_cast<Eigen::Index>(range.size()),
                        static_cast<Eigen::Index>(dict_.size()));
        for (std::size_t c = 0; c < dict_.size(); ++c)
            for (std::size_t k = range.begin; k < range.end; ++k)
                columns_(static_cast<Eigen::Index>(k - range.begin),
                         static_cast<Eigen::Index>(c)) =
                    terms.value(c, data_.y.data(), data_.u.data(), k);
        target_ = Eigen::Map<const Eigen::VectorXd>(data_.y.data() + range.begin,
                                                    static_cast<Eigen::Index>(range.size()));
        const auto val = data_.validation_range();
        floor_ = detail::error_floor({data_.y.data() + val.begin, val.size()}, spec_);
    }

    [[nodiscard]] std::size_t dimension() const { return dict_.size(); }
    [[nodiscard]] const TermDictionary& dictionary() const { return dict_; }
    [[nodiscard]] const Dataset& data() const { return data_; }
    [[nodiscard]] const FitnessSpec& spec() const { return spec_; }
    [[nodiscard]] std::size_t cache_size() const { return cache_.size(); }

    double operator()(const Structure& s)
    {
        if (s.size() != dict_.size())
            throw std::invalid_argument("structure length does not match dictionary");
        if (memoize_) {
            if (auto it = cache_.find(s); it != cache_.end())
                return it->second;
        }
        const double j = compute(s);
        if (memoize_)
            cache_.emplace(s, j);
        return j;
    }

    [[nodiscard]] EstimatedModel fit(const Structure& s) const
    {
        const auto selected = s.indices();
        Eigen::MatrixXd x(columns_.rows(), static_cast<Eigen::Index>(selected.size()));
        for (std::size_t c = 0; c < selected.size(); ++c)
            x.col(static_cast<Eigen::Index>(c)) = columns_.col(static_cast<Eigen::Index>(selected[c]));
        const auto ls = estimate_parameters(x, target_);
        return {s, std::vector<double>(ls.theta.begin(), ls.theta.end()), ls.condition_warning};
    }

private:
    double compute(const Structure& s) const
    {
        const auto model = fit(s);
        const auto range = data_.validation_range();
        const auto prediction = spec_.mode == PredictionMode::free_run
                                    ? simulate_free_run(dict_, model, data_, range)
                                    : predict_one_step(dict_, model, data_, range);
        return detail::score(prediction, {data_.y.data() + range.begin, range.size()},
                             s.cardinality(), spec_, floor_);
    }

    TermDictionary dict_;
    Dataset data_;
    FitnessSpec spec_;
    bool memoize_;
    Eigen::MatrixXd columns_;
    Eigen::VectorXd target_;
    double floor_ = absolute_error_floor;
    std::unordered_map<Structure, double, StructureHash> cache_;
};

} // namespace narxsel

#endif
