#pragma once

// MAR(1) Yule-Walker estimator. With Gamma_k the Kronecker-ordered
// autocovariances, A^B = A (x) I_n and B^B = B^T (x) I_m, the moment
// equations read
//
//   Gamma_1 = A^B Gamma_0 B^B,     Sigma^kron = Gamma_0 - A^B Gamma_{-1} B^B.
//
// The first one rarely has an exact Kronecker-structured solution for sample
// covariances, so (A, B) minimizes ||Gamma_1 - A^B Gamma_0 B^B||_F^2 with
// L-BFGS and the analytic gradient below.

#include <cmath>

#include "mar/covariance.hpp"
#include "mar/lbfgs.hpp"
#include "mar/model.hpp"
#include "mar/random.hpp"
#include "mar/var.hpp"

namespace mar {

/// Squared Frobenius residual of the lag-1 moment equation and its gradient.
class YuleWalkerObjective {
public:
    YuleWalkerObjective(Mat gamma0_kron, Mat gamma1_kron, Index m, Index n)
        : g0_(std::move(gamma0_kron)), g1_(std::move(gamma1_kron)), m_(m), n_(n) {
        if (g0_.rows() != m * n || g0_.cols() != m * n || g1_.rows() != m * n || g1_.cols() != m * n)
            throw dimension_error("YuleWalkerObjective: covariances must be mn x mn");
    }

    Index m() const { return m_; }
    Index n() const { return n_; }

    double value(const Mat& a, const Mat& b) const {
        return (g1_ - kron(a, eye(n_)) * g0_ * kron(b.transpose(), eye(m_))).squaredNorm();
    }

    /// Returns the objective; writes dF/dA (m x m) and dF/dB (n x n).
    double value_and_gradient(const Mat& a, const Mat& b, Mat& grad_a, Mat& grad_b) const {
        const Mat left = kron(a, eye(n_));
        const Mat right = kron(b.transpose(), eye(m_));
        const Mat g0_right = g0_ * right;
        const Mat left_g0 = left * g0_;
        const Mat resid = g1_ - left * g0_right;
        const Mat d_left = -2.0 * resid * g0_right.transpose();
        const Mat d_right = -2.0 * left_g0.transpose() * resid;

        // A enters as A (x) I_n: sum the diagonals of each n x n block.
        grad_a.resize(m_, m_);
        for (Index j = 0; j < m_; ++j)
            for (Index i = 0; i < m_; ++i) grad_a(i, j) = d_left.block(i * n_, j * n_, n_, n_).trace();
        // B^T enters as B^T (x) I_m.
        Mat grad_bt(n_, n_);
        for (Index j = 0; j < n_; ++j)
            for (Index i = 0; i < n_; ++i) grad_bt(i, j) = d_right.block(i * m_, j * m_, m_, m_).trace();
        grad_b = grad_bt.transpose();
        return resid.squaredNorm();
    }

    /// Sigma in vec coordinates from the second moment equation, projected
    /// onto the PSD cone.
    Mat noise_covariance(const Mat& a, const Mat& b, const Mat& gamma_minus1_kron) const {
        const Mat sigma_kron =
            g0_ - kron(a, eye(n_)) * gamma_minus1_kron * kron(b.transpose(), eye(m_));
        return nearest_psd(gamma_vec_from_kron(sigma_kron, m_, n_));
    }

private:
    static Mat eye(Index k) { return Mat::Identity(k, k); }

    Mat g0_;
    Mat g1_;
    Index m_;
    Index n_;
};

/// Fits MAR(1) by minimizing the lag-1 Yule-Walker residual. The start point
/// is the nearest Kronecker factorization of the VAR(1) Yule-Walker
/// coefficient (or seeded normal draws when opts.seed is set).
inline MarModel fit_mar1_yw(const MatrixSeries& s, const FitOptions& opts = {}) {
    opts.validate();
    detail::require_length(static_cast<Index>(s.size()), 3, "fit_mar1_yw");
    const Index m = s.m(), n = s.n();

    MarModel model;
    model.m = m;
    model.n = n;
    model.mean = s.mean();

    const Mat g0 = sample_gamma_vec(s, 0);
    const Mat g1 = sample_gamma_vec(s, 1);
    if (g0.cwiseAbs().maxCoeff() == 0.0) throw data_error("fit_mar1_yw: constant series, singular covariance");
    const YuleWalkerObjective objective(gamma_kron(g0, m, n), gamma_kron(g1, m, n), m, n);

    Mat a0, b0;
    if (opts.seed) {
        Rng rng(*opts.seed);
        a0 = rng.normal_matrix(m, m);
        b0 = rng.normal_matrix(n, n);
    } else {
        Mat phi = detail::right_solve(g1, g0, model.info.used_pinv);
        NkpResult init = nkp(phi, m, n);
        a0 = init.right;
        b0 = init.left;
        if (b0.norm() == 0.0) b0 = Mat::Identity(n, n) * 1e-3;
    }
    // Balance the two factors; the objective is invariant along (cA, B/c).
    const double c = std::sqrt(b0.norm() / a0.norm());
    a0 *= c;
    b0 /= c;

    Vec x(m * m + n * n);
    x << vec(a0), vec(b0);
    auto fg = [&](const Vec& v, Vec& g) {
        Mat a = unvec(v.head(m * m), m, m);
        Mat b = unvec(v.tail(n * n), n, n);
        Mat ga, gb;
        double f = objective.value_and_gradient(a, b, ga, gb);
        g.resize(v.size());
        g << vec(ga), vec(gb);
        return f;
    };
    LbfgsOptions lopt;
    lopt.max_iter = opts.max_iter;
    lopt.grad_tol = opts.tol;
    lopt.rel_ftol = 0.0;
    LbfgsResult res = lbfgs_minimize(fg, x, lopt);

    MarTerm term{unvec(res.x.head(m * m), m, m), unvec(res.x.tail(n * n), n, n)};
    model.sigma = objective.noise_covariance(term.a, term.b, gamma_kron(g1.transpose(), m, n));
    if (opts.normalize) normalize_term(term);
    model.terms.push_back(std::move(term));
    // A stalled line search means no representable decrease is left.
    model.info.converged = res.converged() || res.status == LbfgsStatus::kLineSearch;
    model.info.iterations = res.iterations;
    model.info.objective = res.f;
    return model;
}

} // namespace mar
