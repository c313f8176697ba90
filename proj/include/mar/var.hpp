#pragma once

// VAR(1) baselines on the vectorized series: classical Yule-Walker and a
// single-coefficient Burg step.

#include <string>

#include "mar/covariance.hpp"
#include "mar/model.hpp"
#include "mar/series.hpp"

namespace mar {

namespace detail {

inline Mat centered_columns(const Mat& cols, Vec& mean) {
    mean = cols.rowwise().mean();
    return cols.colwise() - mean;
}

inline void require_length(Index T, Index min_len, const char* who) {
    if (T < min_len)
        throw data_error(std::string(who) + ": series of length " + std::to_string(T) + " is too short (need " +
                         std::to_string(min_len) + ")");
}

/// Solves x * lhs = rhs, falling back to the pseudo-inverse when lhs is singular.
inline Mat right_solve(const Mat& rhs, const Mat& lhs, bool& used_pinv) {
    if (!full_rank(lhs)) {
        used_pinv = true;
        return rhs * pinv(lhs);
    }
    return lhs.transpose().fullPivLu().solve(rhs.transpose()).transpose();
}

/// Solves lhs * x = rhs, falling back to the pseudo-inverse when lhs is singular.
inline Mat left_solve(const Mat& lhs, const Mat& rhs, bool& used_pinv) {
    if (!full_rank(lhs)) {
        used_pinv = true;
        return pinv(lhs) * rhs;
    }
    return lhs.fullPivLu().solve(rhs);
}

} // namespace detail

/// Phi = Gamma_1 Gamma_0^{-1}, Sigma = Gamma_0 - Phi Gamma_1^T (biased
/// autocovariances of the centered series). `cols` is d x T.
inline VarModel fit_var1_yw(const Mat& cols) {
    detail::require_length(cols.cols(), 3, "fit_var1_yw");
    require_finite(cols, "fit_var1_yw");
    VarModel model;
    const Mat c = detail::centered_columns(cols, model.mean);
    const Index T = c.cols();
    const Mat g0 = symmetrize(c * c.transpose() / static_cast<double>(T));
    const Mat g1 = c.rightCols(T - 1) * c.leftCols(T - 1).transpose() / static_cast<double>(T);
    if (g0.cwiseAbs().maxCoeff() == 0.0) throw data_error("fit_var1_yw: constant series, singular covariance");
    model.phi = detail::right_solve(g1, g0, model.info.used_pinv);
    model.sigma = nearest_psd(g0 - model.phi * g1.transpose());
    return model;
}

inline VarModel fit_var1_yw(const MatrixSeries& s) { return fit_var1_yw(s.as_columns()); }

/// Order-1 Burg step with one coefficient shared by both directions:
/// Phi minimizes sum_t ||f_t - Phi b_{t-1}||^2 + ||b_{t-1} - Phi f_t||^2 with
/// f_t = b_t = centered x_t, i.e. Phi (S_bb + S_ff) = S_fb + S_bf. Sigma is the
/// mean outer product of the forward residuals.
inline VarModel fit_var1_burg(const Mat& cols) {
    detail::require_length(cols.cols(), 3, "fit_var1_burg");
    require_finite(cols, "fit_var1_burg");
    VarModel model;
    const Mat c = detail::centered_columns(cols, model.mean);
    const Index T = c.cols();
    const Mat f = c.rightCols(T - 1);
    const Mat b = c.leftCols(T - 1);
    const Mat s_fb = f * b.transpose();
    const Mat den = b * b.transpose() + f * f.transpose();
    if (den.cwiseAbs().maxCoeff() == 0.0) throw data_error("fit_var1_burg: constant series, singular covariance");
    model.phi = detail::right_solve(s_fb + s_fb.transpose(), den, model.info.used_pinv);
    const Mat e = f - model.phi * b;
    model.sigma = symmetrize(e * e.transpose() / static_cast<double>(T - 1));
    return model;
}

inline VarModel fit_var1_burg(const MatrixSeries& s) { return fit_var1_burg(s.as_columns()); }

} // namespace mar
