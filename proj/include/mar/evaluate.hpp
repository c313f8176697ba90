#pragma once

// Out-of-sample evaluation of a fitted model on a test span.

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "mar/forecast.hpp"
#include "mar/mardia.hpp"
#include "mar/metrics.hpp"

namespace mar {

struct EvalOptions {
    /// false: each prediction conditions on the true history up to t-1.
    /// true: forecasts run freely from the end of the training span.
    bool free_running = false;
};

struct EvalReport {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double smape = 0.0;
    double mardia_skew_p = std::numeric_limits<double>::quiet_NaN();
    double mardia_kurt_p = std::numeric_limits<double>::quiet_NaN();
    double mardia_joint_p = std::numeric_limits<double>::quiet_NaN();
    std::string mardia_note;  // empty when the test ran
    bool causal = false;
    double rho = 0.0;
    double fit_seconds = 0.0;
};

namespace detail {

using NextStep = std::function<Mat(const std::vector<Mat>& history, std::size_t len)>;

inline EvalReport evaluate_with(const NextStep& next, Causality causality, std::size_t min_history,
                                const MatrixSeries& train, const MatrixSeries& test, const EvalOptions& opts) {
    if (train.m() != test.m() || train.n() != test.n()) throw dimension_error("evaluate: train/test shape mismatch");
    if (train.size() < min_history) throw data_error("evaluate: training span shorter than the model order");

    std::vector<Mat> buf = train.data();
    std::vector<Mat> preds;
    preds.reserve(test.size());
    for (std::size_t j = 0; j < test.size(); ++j) {
        preds.push_back(next(buf, buf.size()));
        buf.push_back(opts.free_running ? preds.back() : test[j]);
    }
    const MatrixSeries pred(test.m(), test.n(), std::move(preds));

    EvalReport rep;
    rep.mae = mae(test, pred);
    rep.mse = mse(test, pred);
    rep.rmse = std::sqrt(rep.mse);
    rep.smape = smape(test, pred);
    rep.causal = causality.causal;
    rep.rho = causality.radius;

    Mat resid(static_cast<Index>(test.size()), test.dim());
    for (std::size_t j = 0; j < test.size(); ++j)
        resid.row(static_cast<Index>(j)) = vec(test[j] - pred[j]).transpose();
    try {
        const MardiaResult mr = mardia_test(resid);
        rep.mardia_skew_p = mr.skew_p;
        rep.mardia_kurt_p = mr.kurt_p;
        rep.mardia_joint_p = mr.joint_p;
        if (mr.singular_covariance) rep.mardia_note = "singular residual covariance";
    } catch (const data_error& e) {
        rep.mardia_note = e.what();
    }
    return rep;
}

} // namespace detail

/// One-step-ahead (or free-running) forecasts over `test`, which directly
/// follows `train`. Mardia's test runs on the test residuals.
inline EvalReport evaluate(const MarModel& model, const MatrixSeries& train, const MatrixSeries& test,
                           const EvalOptions& opts = {}) {
    if (train.m() != model.m || train.n() != model.n) throw dimension_error("evaluate: model shape mismatch");
    return detail::evaluate_with([&](const std::vector<Mat>& h, std::size_t len) { return predict_next(model, h, len); },
                                 is_causal(model), model.order(), train, test, opts);
}

inline EvalReport evaluate(const VarModel& model, const MatrixSeries& train, const MatrixSeries& test,
                           const EvalOptions& opts = {}) {
    if (train.dim() != model.dim()) throw dimension_error("evaluate: model dimension mismatch");
    const Index m = train.m(), n = train.n();
    return detail::evaluate_with(
        [&](const std::vector<Mat>& h, std::size_t len) {
            const Vec x = vec(h[len - 1]);
            return unvec(model.mean + model.phi * (x - model.mean), m, n);
        },
        is_causal(model), 1, train, test, opts);
}

} // namespace mar
