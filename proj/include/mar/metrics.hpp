#pragma once

// Point-forecast accuracy over matrix series, averaged over N * m * n entries.

#include <cmath>

#include "mar/series.hpp"

namespace mar {

namespace detail {

inline void require_same_shape(const MatrixSeries& actual, const MatrixSeries& pred, const char* who) {
    if (actual.m() != pred.m() || actual.n() != pred.n() || actual.size() != pred.size())
        throw dimension_error(std::string(who) + ": actual and predicted series differ in shape or length");
}

template <typename Term>
double entry_mean(const MatrixSeries& actual, const MatrixSeries& pred, Term term) {
    double sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        const Mat& x = actual[t];
        const Mat& y = pred[t];
        for (Index k = 0; k < x.size(); ++k) sum += term(x.data()[k], y.data()[k]);
    }
    return sum / static_cast<double>(actual.size() * static_cast<std::size_t>(actual.dim()));
}

} // namespace detail

inline double mae(const MatrixSeries& actual, const MatrixSeries& pred) {
    detail::require_same_shape(actual, pred, "mae");
    return detail::entry_mean(actual, pred, [](double x, double y) { return std::abs(x - y); });
}

inline double mse(const MatrixSeries& actual, const MatrixSeries& pred) {
    detail::require_same_shape(actual, pred, "mse");
    return detail::entry_mean(actual, pred, [](double x, double y) { return (x - y) * (x - y); });
}

inline double rmse(const MatrixSeries& actual, const MatrixSeries& pred) { return std::sqrt(mse(actual, pred)); }

/// Symmetric MAPE in percent, in [0, 200]. Entries with |x| + |y| = 0 add 0.
inline double smape(const MatrixSeries& actual, const MatrixSeries& pred) {
    detail::require_same_shape(actual, pred, "smape");
    return 100.0 * detail::entry_mean(actual, pred, [](double x, double y) {
               const double den = 0.5 * (std::abs(x) + std::abs(y));
               return den == 0.0 ? 0.0 : std::abs(x - y) / den;
           });
}

} // namespace mar
