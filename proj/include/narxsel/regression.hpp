#ifndef NARXSEL_REGRESSION_HPP
#define NARXSEL_REGRESSION_HPP

/** @file
 * Regressor construction, least-squares estimation and model simulation
 * for linear-in-parameters polynomial NARX models.
 */

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dataset.hpp"
#include "dictionary.hpp"
#include "structure.hpp"

namespace narxsel
{

/// Terms flattened for fast repeated evaluation.  Factor f of term t lives
/// at [offsets[t], offsets[t+1]); lags are stored negative for outputs.
class CompiledTerms
{
public:
    CompiledTerms(const TermDictionary& dict, const std::vector<std::size_t>& selected)
    {
        offsets_.reserve(selected.size() + 1);
        offsets_.push_back(0);
        for (auto i : selected) {
            for (const auto& f : dict[i].factors())
                codes_.push_back(f.signal == Signal::output ? -f.lag : f.lag);
            offsets_.push_back(codes_.size());
        }
    }

    [[nodiscard]] std::size_t size() const { return offsets_.size() - 1; }

    /// Value of term t at sample k, reading outputs from `out` and inputs from `in`.
    [[nodiscard]] double value(std::size_t t, const double* out, const double* in,
                               std::size_t k) const
    {
        double v = 1.0;
        for (auto f = offsets_[t]; f < offsets_[t + 1]; ++f) {
            const int code = codes_[f];
            v *= code < 0 ? out[k + code] : in[k - code];
        }
        return v;
    }

private:
    std::vector<int> codes_;
    std::vector<std::size_t> offsets_;
};

struct RegressionProblem
{
    Eigen::MatrixXd matrix;
    Eigen::VectorXd target;
};

inline void check_range(const TermDictionary& dict, const Dataset& data, SampleRange range)
{
    if (range.begin < static_cast<std::size_t>(dict.max_lag()))
        throw std::out_of_range("sample range starts before the maximum lag");
    if (range.end > data.size() || range.begin >= range.end)
        throw std::out_of_range("sample range outside the dataset");
    if (data.u.size() != data.y.size())
        throw std::invalid_argument("input and output series differ in length");
}

/// One-step regressors from measured data; row t is sample range.begin + t.
inline RegressionProblem build_regressor_matrix(const TermDictionary& dict, const Structure& s,
                                                const Dataset& data, SampleRange range)
{
    check_range(dict, data, range);
    if (s.size() != dict.size())
        throw std::invalid_argument("structure length does not match dictionary");
    const auto selected = s.indices();
    const CompiledTerms terms(dict, selected);
    RegressionProblem p{Eigen::MatrixXd(static_cast<Eigen::Index>(range.size()),
                                        static_cast<Eigen::Index>(selected.size())),
                        Eigen::VectorXd(static_cast<Eigen::Index>(range.size()))};
    for (std::size_t c = 0; c < selected.size(); ++c)
        for (std::size_t k = range.begin; k < range.end; ++k)
            p.matrix(static_cast<Eigen::Index>(k - range.begin), static_cast<Eigen::Index>(c)) =
                terms.value(c, data.y.data(), data.u.data(), k);
    for (std::size_t k = range.begin; k < range.end; ++k)
        p.target(static_cast<Eigen::Index>(k - range.begin)) = data.y[k];
    return p;
}

struct LeastSquaresFit
{
    Eigen::VectorXd theta;
    Eigen::Index rank = 0;
    bool condition_warning = false;
};

/**
 * Minimum-norm least squares through a complete orthogonal decomposition.
 * Numerical rank uses the tolerance rows * eps * (largest column norm);
 * rank < cols raises condition_warning but still returns a solution.
 */
inline LeastSquaresFit estimate_parameters(const Eigen::MatrixXd& matrix,
                                           const Eigen::VectorXd& target)
{
    if (matrix.rows() == 0 || matrix.cols() == 0)
        throw std::invalid_argument("cannot estimate parameters from an empty matrix");
    if (matrix.rows() != target.size())
        throw std::invalid_argument("regressor rows and target length differ");
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(matrix.rows(), matrix.cols());
    // The threshold is relative to the largest pivot, which under column
    // pivoting is the largest column norm.
    cod.setThreshold(static_cast<double>(matrix.rows()) * std::numeric_limits<double>::epsilon());
    cod.compute(matrix);
    LeastSquaresFit fit;
    fit.rank = cod.rank();
    fit.condition_warning = fit.rank < matrix.cols();
    fit.theta = cod.solve(target);
    return fit;
}

struct EstimatedModel
{
    Structure structure;
    std::vector<double> theta;
    bool condition_warning = false;
};

/// Fits theta for `s` on the dataset's estimation segment.
inline EstimatedModel estimate_model(const TermDictionary& dict, const Structure& s,
                                     const Dataset& data)
{
    const auto p = build_regressor_matrix(dict, s, data, data.estimation_range(dict.max_lag()));
    const auto fit = estimate_parameters(p.matrix, p.target);
    return {s, std::vector<double>(fit.theta.begin(), fit.theta.end()), fit.condition_warning};
}

struct Prediction
{
    std::vector<double> yhat;
    bool diverged = false;
};

inline constexpr double divergence_bound = 1e8;

/**
 * Free-run simulation over `range`.  Lagged outputs before range.begin are
 * the measured samples; inside the range only predictions are fed back.
 * Inputs are always measured.  Stops early, flagging divergence, once a
 * prediction is non-finite or exceeds divergence_bound in magnitude.
 */
inline Prediction simulate_free_run(const TermDictionary& dict, const EstimatedModel& model,
                                    const Dataset& data, SampleRange range)
{
    check_range(dict, data, range);
    const auto selected = model.structure.indices();
    if (selected.size() != model.theta.size())
        throw std::invalid_argument("coefficient count does not match structure");
    const CompiledTerms terms(dict, selected);

    // Output history: measured up to range.begin, predicted after.
    std::vector<double> history(data.y.begin(), data.y.begin() + static_cast<long>(range.begin));
    history.resize(range.end);
    Prediction out;
    out.yhat.reserve(range.size());
    for (std::size_t k = range.begin; k < range.end; ++k) {
        double v = 0.0;
        for (std::size_t t = 0; t < terms.size(); ++t)
            v += model.theta[t] * terms.value(t, history.data(), data.u.data(), k);
        out.yhat.push_back(v);
        if (!std::isfinite(v) || std::abs(v) > divergence_bound) {
            out.diverged = true;
            break;
        }
        history[k] = v;
    }
    return out;
}

/// One-step-ahead prediction from measured regressors.
inline Prediction predict_one_step(const TermDictionary& dict, const EstimatedModel& model,
                                   const Dataset& data, SampleRange range)
{
    check_range(dict, data, range);
    const auto selected = model.structure.indices();
    if (selected.size() != model.theta.size())
        throw std::invalid_argument("coefficient count does not match structure");
    const CompiledTerms terms(dict, selected);
    Prediction out;
    out.yhat.reserve(range.size());
    for (std::size_t k = range.begin; k < range.end; ++k) {
        double v = 0.0;
        for (std::size_t t = 0; t < terms.size(); ++t)
            v += model.theta[t] * terms.value(t, data.y.data(), data.u.data(), k);
        out.yhat.push_back(v);
        if (!std::isfinite(v))
            out.diverged = true;
    }
    return out;
}

} // namespace narxsel

#endif
