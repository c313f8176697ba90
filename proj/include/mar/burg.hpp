#pragma once

// Burg-type recursion for MAR(p).
//
// Forward and backward residuals of order k are
//   f_t^(k) = f_t^(k-1)     - A b_{t-1}^(k-1) B^T
//   b_t^(k) = b_{t-1}^(k-1) - A f_t^(k-1)     B^T
// with (A, B) = (A_k(k), B_k(k)) chosen to minimize the summed energy
//   E^(k) = sum_t ||f_t^(k)||_F^2 + ||b_t^(k)||_F^2.
// For fixed B the minimizing A is closed form, and likewise B for fixed A, so
// the step alternates the two and renormalizes A after each A update.
// Lower-lag coefficients are downdated in Kronecker form and projected back
// onto Kronecker structure with the nearest Kronecker product.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mar/model.hpp"
#include "mar/random.hpp"
#include "mar/series.hpp"
#include "mar/var.hpp"

namespace mar {

/// Residuals of the order-`order` recursion. forward[j] and backward[j]
/// hold f_t and b_t for t = first + j, so both cover t = first .. N-1.
struct BurgState {
    std::size_t order = 0;
    std::size_t first = 0;
    std::vector<Mat> forward;
    std::vector<Mat> backward;
    std::vector<MarTerm> terms;  // (A_k(i), B_k(i)), i = 1..order

    /// Order-0 state: both residual sequences equal the (already centered) data.
    static BurgState initial(const MatrixSeries& centered) {
        BurgState st;
        st.forward = centered.data();
        st.backward = centered.data();
        return st;
    }

    /// Number of (f_t, b_{t-1}) pairs the next order step can use.
    std::size_t pair_count() const { return forward.size() < 2 ? 0 : forward.size() - 1; }
};

struct BurgStepResult {
    Mat a;
    Mat b;
    bool converged = true;
    bool used_pinv = false;
    std::size_t sweeps = 0;
    std::vector<double> energy;  // E after initialization and after each sweep
};

/// Direct evaluation of sum_t ||f_t - A b_{t-1} B^T||^2 + ||b_{t-1} - A f_t B^T||^2.
inline double burg_energy(const BurgState& st, const Mat& a, const Mat& b) {
    double e = 0.0;
    const Mat bt = b.transpose();
    for (std::size_t j = 1; j < st.forward.size(); ++j) {
        const Mat& f = st.forward[j];
        const Mat& bw = st.backward[j - 1];
        e += (f - a * bw * bt).squaredNorm() + (bw - a * f * bt).squaredNorm();
    }
    return e;
}

/// Normal-equation pieces of the two closed-form updates.
struct BurgNormalEquations {
    Mat num_a;  // sum f B b^T + b B f^T                  (m x m)
    Mat den_a;  // sum (B b^T)^2 + (B f^T)^2              (m x m)
    Mat num_b;  // sum b^T A^T f + f^T A^T b              (n x n), right side for B^T
    Mat den_b;  // sum (A b)^2 +/- (A f)^2                (n x n)
};

inline Mat burg_a_numerator(const BurgState& st, const Mat& b, Mat& den) {
    const Index m = st.forward.front().rows();
    Mat num = Mat::Zero(m, m);
    den = Mat::Zero(m, m);
    const Mat btb = b.transpose() * b;
    for (std::size_t j = 1; j < st.forward.size(); ++j) {
        const Mat& f = st.forward[j];
        const Mat& bw = st.backward[j - 1];
        const Mat fb = f * b;
        const Mat bb = bw * b;
        num += fb * bw.transpose() + bb * f.transpose();
        den += bw * btb * bw.transpose() + f * btb * f.transpose();
    }
    return num;
}

inline Mat burg_b_numerator(const BurgState& st, const Mat& a, BurgBSign sign, Mat& den) {
    const Index n = st.forward.front().cols();
    Mat num = Mat::Zero(n, n);
    den = Mat::Zero(n, n);
    const double s = sign == BurgBSign::kPlus ? 1.0 : -1.0;
    for (std::size_t j = 1; j < st.forward.size(); ++j) {
        const Mat& f = st.forward[j];
        const Mat& bw = st.backward[j - 1];
        const Mat ab = a * bw;
        const Mat af = a * f;
        num += ab.transpose() * f + af.transpose() * bw;
        den += ab.transpose() * ab + s * (af.transpose() * af);
    }
    return num;
}

inline BurgNormalEquations burg_normal_equations(const BurgState& st, const Mat& a, const Mat& b,
                                                 BurgBSign sign = BurgBSign::kPlus) {
    BurgNormalEquations eq;
    eq.num_a = burg_a_numerator(st, b, eq.den_a);
    eq.num_b = burg_b_numerator(st, a, sign, eq.den_b);
    return eq;
}

struct BurgStationarity {
    double a_residual;  // ||A den_a - num_a|| / max(||num_a||, ||A den_a||)
    double b_residual;  // ||den_b B^T - num_b|| / max(||num_b||, ||den_b B^T||)
};

/// Relative residuals of both closed-form equations at (A, B).
inline BurgStationarity burg_stationarity(const BurgState& st, const Mat& a, const Mat& b,
                                          BurgBSign sign = BurgBSign::kPlus) {
    const BurgNormalEquations eq = burg_normal_equations(st, a, b, sign);
    auto rel = [](const Mat& lhs, const Mat& rhs) {
        const double scale = std::max(lhs.norm(), rhs.norm());
        return scale == 0.0 ? 0.0 : (lhs - rhs).norm() / scale;
    };
    return {rel(a * eq.den_a, eq.num_a), rel(eq.den_b * b.transpose(), eq.num_b)};
}

/// Solves for (A_k(k), B_k(k)) on the residuals of `st`, alternating the
/// closed-form A and B updates until E changes by at most opts.tol relatively.
inline BurgStepResult burg_order_step(const BurgState& st, const FitOptions& opts = {}) {
    opts.validate();
    if (st.forward.empty() || st.forward.size() != st.backward.size())
        throw dimension_error("burg_order_step: malformed residual state");
    if (st.pair_count() < 1) throw data_error("burg_order_step: at least 2 usable time indices are required");
    const Index m = st.forward.front().rows();
    const Index n = st.forward.front().cols();

    BurgStepResult out;
    bool all_zero = true;
    for (std::size_t j = 0; j < st.forward.size() && all_zero; ++j)
        all_zero = st.forward[j].isZero(0.0) && st.backward[j].isZero(0.0);
    if (all_zero) {
        out.a = Mat::Identity(m, m) / std::sqrt(static_cast<double>(m));
        out.b = Mat::Zero(n, n);
        out.energy.push_back(0.0);
        return out;
    }

    Mat a, b;
    if (opts.seed) {
        Rng rng(*opts.seed);
        a = rng.normal_matrix(m, m);
        b = rng.normal_matrix(n, n);
    } else {
        a = Mat::Identity(m, m) + 0.01 * Mat::Ones(m, m);
        b = Mat::Identity(n, n);
    }
    a /= a.norm();
    double e_prev = burg_energy(st, a, b);
    out.energy.push_back(e_prev);
    out.converged = false;

    for (std::size_t sweep = 1; sweep <= opts.max_iter; ++sweep) {
        Mat den;
        Mat num = burg_a_numerator(st, b, den);
        a = detail::right_solve(num, den, out.used_pinv);
        const double an = a.norm();
        if (an == 0.0) {
            // No coupling between the two residual sequences: zero coefficient.
            out.a = Mat::Identity(m, m) / std::sqrt(static_cast<double>(m));
            out.b = Mat::Zero(n, n);
            out.converged = true;
            out.sweeps = sweep;
            out.energy.push_back(burg_energy(st, out.a, out.b));
            return out;
        }
        a /= an;
        num = burg_b_numerator(st, a, opts.burg_b_sign, den);
        b = detail::left_solve(den, num, out.used_pinv).transpose();

        const double e = burg_energy(st, a, b);
        out.energy.push_back(e);
        out.sweeps = sweep;
        const double change = std::abs(e_prev - e);
        e_prev = e;
        if (change <= opts.tol * std::max(e, std::numeric_limits<double>::min())) {
            out.converged = true;
            break;
        }
    }
    out.a = std::move(a);
    out.b = std::move(b);
    return out;
}

/// Advances the residuals one order with coefficient (A, B).
inline BurgState burg_residual_update(const BurgState& st, const Mat& a, const Mat& b) {
    if (st.pair_count() < 1) throw data_error("burg_residual_update: no usable time indices left");
    BurgState next;
    next.order = st.order + 1;
    next.first = st.first + 1;
    next.terms = st.terms;
    const Mat bt = b.transpose();
    next.forward.reserve(st.pair_count());
    next.backward.reserve(st.pair_count());
    for (std::size_t j = 1; j < st.forward.size(); ++j) {
        const Mat& f = st.forward[j];
        const Mat& bw = st.backward[j - 1];
        next.forward.push_back(f - a * bw * bt);
        next.backward.push_back(bw - a * f * bt);
    }
    return next;
}

/// Order-k coefficients from order k-1 ones and the new (A_k, B_k):
/// B_k(i) (x) A_k(i) ~ B_{k-1}(i) (x) A_{k-1}(i) - [B_k (x) A_k][B_{k-1}(k-i) (x) A_{k-1}(k-i)]
/// for i = 1..k-1, each projected with nkp; the new pair is appended last.
/// `nkp_residuals` receives one entry per downdated lag.
inline std::vector<MarTerm> update_lower_coeffs(const std::vector<MarTerm>& prev, const Mat& ak, const Mat& bk,
                                                std::vector<double>* nkp_residuals = nullptr) {
    const std::size_t k = prev.size() + 1;
    const Index m = ak.rows(), n = bk.rows();
    std::vector<MarTerm> out;
    out.reserve(k);
    for (std::size_t i = 1; i < k; ++i) {
        const MarTerm& same = prev[i - 1];
        const MarTerm& mirror = prev[k - i - 1];
        const Mat rhs = kron(same.b, same.a) - kron(bk * mirror.b, ak * mirror.a);
        NkpResult r = nkp(rhs, m, n);
        if (nkp_residuals) nkp_residuals->push_back(r.residual_fro);
        out.push_back({std::move(r.right), std::move(r.left)});
    }
    out.push_back({ak, bk});
    return out;
}

/// Burg-type MAR(p) fit on the centered series. Sigma is the mean outer
/// product of vec of the final forward residuals.
inline MarModel fit_mar_burg(const MatrixSeries& s, std::size_t p, const FitOptions& opts = {}) {
    opts.validate();
    if (p < 1) throw model_error("fit_mar_burg: order must be at least 1");
    if (s.size() <= p + 1)
        throw data_error("fit_mar_burg: series of length " + std::to_string(s.size()) + " is too short for order " +
                         std::to_string(p));
    MarModel model;
    model.m = s.m();
    model.n = s.n();
    model.mean = s.mean();

    BurgState st = BurgState::initial(s.minus(model.mean));
    for (std::size_t k = 1; k <= p; ++k) {
        BurgStepResult step = burg_order_step(st, opts);
        model.info.converged = model.info.converged && step.converged;
        model.info.used_pinv = model.info.used_pinv || step.used_pinv;
        model.info.iterations += step.sweeps;
        model.info.objective = step.energy.back();
        MarTerm newest{step.a, step.b};
        if (opts.normalize) normalize_term(newest);
        std::vector<MarTerm> terms = update_lower_coeffs(st.terms, newest.a, newest.b, &model.info.nkp_residuals);
        st = burg_residual_update(st, newest.a, newest.b);
        st.terms = std::move(terms);
    }
    model.terms = st.terms;

    const Index d = s.dim();
    Mat sigma = Mat::Zero(d, d);
    for (const Mat& f : st.forward) {
        const Mat v = vec(f);
        sigma += v * v.transpose();
    }
    model.sigma = symmetrize(sigma / static_cast<double>(st.forward.size()));
    return model;
}

} // namespace mar
