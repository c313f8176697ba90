#pragma once

#include <string>

#include "mar/model.hpp"
#include "mar/series.hpp"

namespace mar {

/// One-step forecast of X_{t+1} from history[0..len), using the last order() entries.
inline Mat predict_next(const MarModel& model, const std::vector<Mat>& history, std::size_t len) {
    Mat out = model.mean;
    for (std::size_t i = 1; i <= model.order(); ++i) {
        const MarTerm& term = model.terms[i - 1];
        out += term.a * (history[len - i] - model.mean) * term.b.transpose();
    }
    return out;
}

/// h-step forecasts after the end of `history`, by iterated substitution.
inline MatrixSeries predict(const MarModel& model, const MatrixSeries& history, std::size_t horizon) {
    if (history.m() != model.m || history.n() != model.n)
        throw dimension_error("predict: history shape does not match the model");
    if (history.size() < model.order())
        throw data_error("predict: history of length " + std::to_string(history.size()) +
                         " is shorter than the model order " + std::to_string(model.order()));
    if (horizon < 1) throw data_error("predict: horizon must be at least 1");
    std::vector<Mat> buf = history.data();
    for (std::size_t h = 0; h < horizon; ++h) buf.push_back(predict_next(model, buf, buf.size()));
    return MatrixSeries(model.m, model.n, std::vector<Mat>(buf.end() - static_cast<std::ptrdiff_t>(horizon), buf.end()));
}

/// h-step forecasts of a VAR(1); `history` is d x T, the result d x horizon.
inline Mat predict(const VarModel& model, const Mat& history, std::size_t horizon) {
    if (history.rows() != model.dim()) throw dimension_error("predict: history dimension does not match the model");
    if (history.cols() < 1) throw data_error("predict: empty history");
    Mat out(model.dim(), static_cast<Index>(horizon));
    Vec x = history.col(history.cols() - 1);
    for (std::size_t h = 0; h < horizon; ++h) {
        x = model.mean + model.phi * (x - model.mean);
        out.col(static_cast<Index>(h)) = x;
    }
    return out;
}

/// Companion matrix of the vectorized VAR(p) form of `model`.
inline Mat companion_matrix(const MarModel& model) {
    const Index d = model.m * model.n;
    const auto p = static_cast<Index>(model.order());
    Mat c = Mat::Zero(d * p, d * p);
    for (Index i = 0; i < p; ++i) c.block(0, i * d, d, d) = model.phi(static_cast<std::size_t>(i + 1));
    if (p > 1) c.bottomLeftCorner(d * (p - 1), d * (p - 1)).setIdentity();
    return c;
}

struct Causality {
    bool causal;
    double radius;  // rho(A) rho(B) for order 1, companion spectral radius otherwise
};

inline Causality is_causal(const MarModel& model) {
    if (model.order() == 0) return {true, 0.0};
    double r = 0.0;
    if (model.order() == 1)
        r = spectral_radius(model.terms[0].a) * spectral_radius(model.terms[0].b);
    else
        r = spectral_radius(companion_matrix(model));
    return {r < 1.0, r};
}

inline Causality is_causal(const VarModel& model) {
    const double r = spectral_radius(model.phi);
    return {r < 1.0, r};
}

} // namespace mar
