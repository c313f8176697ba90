#pragma once

// Mardia's multivariate skewness and kurtosis tests.
//
// With S the maximum-likelihood covariance of the centered sample x_1..x_N
// and g_ij = x_i^T S^-1 x_j:
//   b1 = (1/N^2) sum_ij g_ij^3,        N b1 / 6 ~ chi^2 with d(d+1)(d+2)/6 dof
//   b2 = (1/N)   sum_i  g_ii^2,        (b2 - d(d+2)) / sqrt(8 d (d+2) / N) ~ N(0, 1)
// The kurtosis p-value is two-sided. The joint p-value is the Bonferroni
// combination min(1, 2 min(p_skew, p_kurt)).

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "mar/linalg.hpp"

namespace mar {

struct MardiaResult {
    double b1 = 0.0;
    double b2 = 0.0;
    double skew_statistic = 0.0;
    double kurt_statistic = 0.0;
    double skew_p = 1.0;
    double kurt_p = 1.0;
    double joint_p = 1.0;
    bool singular_covariance = false;  // pseudo-inverse used
};

/// `sample` holds one observation per row (N x d).
inline MardiaResult mardia_test(const Mat& sample) {
    const Index n_obs = sample.rows();
    const Index d = sample.cols();
    if (d < 1) throw dimension_error("mardia_test: dimension must be positive");
    if (n_obs <= d + 1)
        throw data_error("mardia_test: sample size " + std::to_string(n_obs) + " is too small for dimension " +
                         std::to_string(d));
    require_finite(sample, "mardia_test");

    MardiaResult r;
    const Mat c = sample.rowwise() - sample.colwise().mean();
    const double N = static_cast<double>(n_obs);
    const Mat s = c.transpose() * c / N;
    Mat s_inv;
    if (full_rank(s)) {
        s_inv = s.llt().solve(Mat::Identity(d, d));
    } else {
        r.singular_covariance = true;
        s_inv = pinv(s);
    }
    const Mat g = c * s_inv * c.transpose();
    r.b1 = g.array().cube().sum() / (N * N);
    r.b2 = g.diagonal().array().square().sum() / N;

    const double dd = static_cast<double>(d);
    const double dof = dd * (dd + 1.0) * (dd + 2.0) / 6.0;
    r.skew_statistic = N * r.b1 / 6.0;
    r.kurt_statistic = (r.b2 - dd * (dd + 2.0)) / std::sqrt(8.0 * dd * (dd + 2.0) / N);

    const boost::math::chi_squared chi2(dof);
    const boost::math::normal z;
    r.skew_p = std::clamp(boost::math::cdf(boost::math::complement(chi2, std::max(r.skew_statistic, 0.0))), 0.0, 1.0);
    r.kurt_p = std::clamp(2.0 * boost::math::cdf(boost::math::complement(z, std::abs(r.kurt_statistic))), 0.0, 1.0);
    r.joint_p = std::min(1.0, 2.0 * std::min(r.skew_p, r.kurt_p));
    return r;
}

} // namespace mar
