#pragma once

// Iterated least squares baseline for MAR(1): alternate the exact
// least-squares solutions for A (B fixed) and B (A fixed) of
//   J(A, B) = sum_t ||X_t - A X_{t-1} B^T||_F^2,
// started from the nearest Kronecker factors of the VAR(1) least-squares fit.

#include <cmath>
#include <limits>

#include "mar/model.hpp"
#include "mar/random.hpp"
#include "mar/series.hpp"
#include "mar/var.hpp"

namespace mar {

inline double lse_objective(const MatrixSeries& centered, const Mat& a, const Mat& b) {
    double j = 0.0;
    const Mat bt = b.transpose();
    for (std::size_t t = 1; t < centered.size(); ++t) j += (centered[t] - a * centered[t - 1] * bt).squaredNorm();
    return j;
}

inline MarModel fit_mar1_lse(const MatrixSeries& s, const FitOptions& opts = {}) {
    opts.validate();
    detail::require_length(static_cast<Index>(s.size()), 3, "fit_mar1_lse");
    const Index m = s.m(), n = s.n();
    MarModel model;
    model.m = m;
    model.n = n;
    model.mean = s.mean();
    const MatrixSeries x = s.minus(model.mean);
    const std::size_t T = x.size();

    Mat a, b;
    if (opts.seed) {
        Rng rng(*opts.seed);
        a = rng.normal_matrix(m, m);
        b = rng.normal_matrix(n, n);
    } else {
        // Nearest Kronecker factors of the unrestricted VAR(1) least-squares coefficient.
        Mat sxy = Mat::Zero(s.dim(), s.dim()), syy = Mat::Zero(s.dim(), s.dim());
        for (std::size_t t = 1; t < T; ++t) {
            const Mat xt = vec(x[t]), xp = vec(x[t - 1]);
            sxy += xt * xp.transpose();
            syy += xp * xp.transpose();
        }
        NkpResult init = nkp(detail::right_solve(sxy, syy, model.info.used_pinv), m, n);
        a = init.right;
        b = init.left;
        if (b.norm() == 0.0) {
            a = Mat::Identity(m, m) + 0.01 * Mat::Ones(m, m);
            b = Mat::Identity(n, n);
        }
    }
    a /= a.norm();

    double j_prev = lse_objective(x, a, b);
    model.info.objective_trace.push_back(j_prev);
    model.info.converged = false;
    for (std::size_t sweep = 1; sweep <= opts.max_iter; ++sweep) {
        Mat num = Mat::Zero(m, m), den = Mat::Zero(m, m);
        const Mat btb = b.transpose() * b;
        for (std::size_t t = 1; t < T; ++t) {
            num += x[t] * b * x[t - 1].transpose();
            den += x[t - 1] * btb * x[t - 1].transpose();
        }
        a = detail::right_solve(num, den, model.info.used_pinv);
        const double an = a.norm();
        if (an == 0.0) {
            a = Mat::Identity(m, m) / std::sqrt(static_cast<double>(m));
            b.setZero();
            model.info.converged = true;
            model.info.iterations = sweep;
            break;
        }
        a /= an;

        Mat num_b = Mat::Zero(n, n), den_b = Mat::Zero(n, n);
        const Mat ata = a.transpose() * a;
        for (std::size_t t = 1; t < T; ++t) {
            num_b += x[t].transpose() * a * x[t - 1];
            den_b += x[t - 1].transpose() * ata * x[t - 1];
        }
        b = detail::right_solve(num_b, den_b, model.info.used_pinv);

        const double j = lse_objective(x, a, b);
        model.info.objective_trace.push_back(j);
        model.info.iterations = sweep;
        const double change = std::abs(j_prev - j);
        j_prev = j;
        if (change <= opts.tol * std::max(j, std::numeric_limits<double>::min())) {
            model.info.converged = true;
            break;
        }
    }
    model.info.objective = lse_objective(x, a, b);

    MarTerm term{a, b};
    if (opts.normalize) normalize_term(term);
    const Index d = s.dim();
    Mat sigma = Mat::Zero(d, d);
    const Mat bt = term.b.transpose();
    for (std::size_t t = 1; t < T; ++t) {
        const Mat e = vec(x[t] - term.a * x[t - 1] * bt);
        sigma += e * e.transpose();
    }
    model.sigma = symmetrize(sigma / static_cast<double>(T - 1));
    model.terms.push_back(std::move(term));
    return model;
}

} // namespace mar
