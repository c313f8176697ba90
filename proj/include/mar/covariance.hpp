#pragma once

// Sample autocovariances of a matrix series and the index permutation that
// turns the vec-covariance Gamma_k = E[vec(X_t) vec(X_{t-k})^T] into the
// Kronecker-ordered Gamma_k^kron = E[X_t (x) X_{t-k}^T].

#include <cstdlib>
#include <map>
#include <string>

#include "mar/linalg.hpp"
#include "mar/series.hpp"

namespace mar {

/// (1/T) sum_t vec(X_t - mean) vec(X_{t-k} - mean)^T over the valid t.
/// Negative k gives the transpose of the positive-lag estimate.
inline Mat sample_gamma_vec(const MatrixSeries& s, long k) {
    const auto T = static_cast<long>(s.size());
    if (std::labs(k) >= T)
        throw data_error("sample_gamma_vec: |lag| " + std::to_string(k) + " must be below T = " +
                         std::to_string(T));
    if (k < 0) return sample_gamma_vec(s, -k).transpose();
    const Mat c = s.as_columns().colwise() - vec(s.mean()).col(0);
    const Index lag = k;
    const Index len = T - lag;
    const Mat g = c.rightCols(len) * c.leftCols(len).transpose() / static_cast<double>(T);
    return k == 0 ? symmetrize(g) : g;
}

/// Source position inside the vec-covariance of entry (row, col) of the
/// Kronecker-ordered covariance, 0-based.
struct GammaIndex {
    Index row;
    Index col;
};

inline GammaIndex gamma_kron_source(Index row, Index col, Index m, Index n) {
    return {(col / m) * m + row / n, (row % n) * m + col % m};
}

/// Pure index permutation: result(i, j) = gamma_vec(source(i, j)). For
/// m x n matrices X, Y, gamma_kron(vec(X) vec(Y)^T) == kron(X, Y^T).
inline Mat gamma_kron(const Mat& gamma_vec, Index m, Index n) {
    const Index d = m * n;
    if (gamma_vec.rows() != d || gamma_vec.cols() != d)
        throw dimension_error("gamma_kron: expected " + std::to_string(d) + "x" + std::to_string(d) +
                              ", got " + shape_str(gamma_vec));
    Mat out(d, d);
    for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < d; ++i) {
            const auto src = gamma_kron_source(i, j, m, n);
            out(i, j) = gamma_vec(src.row, src.col);
        }
    return out;
}

/// Inverse of gamma_kron.
inline Mat gamma_vec_from_kron(const Mat& gamma_k, Index m, Index n) {
    const Index d = m * n;
    if (gamma_k.rows() != d || gamma_k.cols() != d)
        throw dimension_error("gamma_vec_from_kron: expected " + std::to_string(d) + "x" +
                              std::to_string(d) + ", got " + shape_str(gamma_k));
    Mat out(d, d);
    for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < d; ++i) {
            const auto src = gamma_kron_source(i, j, m, n);
            out(src.row, src.col) = gamma_k(i, j);
        }
    return out;
}

inline Mat sample_gamma_kron(const MatrixSeries& s, long k) {
    return gamma_kron(sample_gamma_vec(s, k), s.m(), s.n());
}

/// Lag-indexed family of Kronecker-ordered autocovariances.
struct KronCovariance {
    Index m = 0;
    Index n = 0;
    std::map<long, Mat> lags;

    const Mat& at(long k) const {
        auto it = lags.find(k);
        if (it == lags.end()) throw dimension_error("KronCovariance: lag " + std::to_string(k) + " not stored");
        return it->second;
    }

    /// Gamma_{-k}^kron recovered from Gamma_k^kron through the vec covariance.
    Mat negated(long k) const {
        return gamma_kron(gamma_vec_from_kron(at(k), m, n).transpose(), m, n);
    }
};

/// Estimates Gamma_k^kron for k in [-max_lag, max_lag].
inline KronCovariance sample_kron_covariance(const MatrixSeries& s, long max_lag) {
    KronCovariance out{s.m(), s.n(), {}};
    for (long k = 0; k <= max_lag; ++k) {
        Mat g = sample_gamma_vec(s, k);
        out.lags[k] = gamma_kron(g, s.m(), s.n());
        if (k > 0) out.lags[-k] = gamma_kron(g.transpose(), s.m(), s.n());
    }
    return out;
}

} // namespace mar
