#pragma once

// Limited-memory BFGS for smooth unconstrained problems, with a strong-Wolfe
// line search (bracketing + zoom by safeguarded cubic interpolation).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace mar {

struct LbfgsOptions {
    std::size_t max_iter = 1000;
    std::size_t history = 10;
    double grad_tol = 1e-10;   // stop when ||g|| <= grad_tol * (1 + |f|)
    double rel_ftol = 1e-15;   // stop when (f_prev - f) <= rel_ftol * |f|; 0 disables
    double c1 = 1e-4;
    double c2 = 0.9;
    std::size_t max_line_search = 40;
    // Approximate Wolfe acceptance (Hager-Zhang): once f is flat to within
    // approx_eps * |f|, a step is accepted on its directional derivative alone.
    double approx_eps = 1e-10;
};

enum class LbfgsStatus { kGradient, kObjective, kMaxIter, kLineSearch };

struct LbfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    double grad_norm = 0.0;
    std::size_t iterations = 0;
    LbfgsStatus status = LbfgsStatus::kMaxIter;

    bool converged() const { return status == LbfgsStatus::kGradient || status == LbfgsStatus::kObjective; }
};

namespace detail {

/// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db), clamped
/// to the inner part of [a, b].
inline double cubic_step(double a, double fa, double da, double b, double fb, double db) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - da * db;
    double t = 0.5 * (a + b);
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        const double denom = db - da + 2.0 * d2;
        if (denom != 0.0) t = b - (b - a) * (db + d2 - d1) / denom;
    }
    const double margin = 0.1 * (hi - lo);
    if (!std::isfinite(t) || t < lo + margin || t > hi - margin) t = 0.5 * (a + b);
    return t;
}

} // namespace detail

/// `fg(x, g)` must return f(x) and write the gradient into g.
template <typename Objective>
LbfgsResult lbfgs_minimize(Objective&& fg, Eigen::VectorXd x, const LbfgsOptions& opt = {}) {
    using V = Eigen::VectorXd;
    const Eigen::Index dim = x.size();
    V g(dim);
    double f = fg(x, g);
    std::deque<V> s_hist, y_hist;
    std::deque<double> rho_hist;

    LbfgsResult res;
    auto finish = [&](LbfgsStatus st) {
        res.x = x;
        res.f = f;
        res.grad_norm = g.norm();
        res.status = st;
        return res;
    };

    for (std::size_t it = 0; it < opt.max_iter; ++it) {
        res.iterations = it;
        if (g.norm() <= opt.grad_tol * (1.0 + std::abs(f))) return finish(LbfgsStatus::kGradient);

        // Two-loop recursion for d = -H g.
        V q = g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            alpha[k] = rho_hist[k] * s_hist[k].dot(q);
            q -= alpha[k] * y_hist[k];
        }
        if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            const double beta = rho_hist[k] * y_hist[k].dot(q);
            q += (alpha[k] - beta) * s_hist[k];
        }
        V d = -q;
        double dg0 = d.dot(g);
        if (!(dg0 < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            d = -g;
            dg0 = d.dot(g);
        }

        double step = s_hist.empty() ? std::min(1.0, 1.0 / std::max(g.norm(), 1e-300)) : 1.0;
        const double f0 = f;
        V x_new(dim), g_new(dim);
        double f_new = f0;

        // Bracketing phase, then zoom.
        double a_lo = 0.0, f_lo = f0, d_lo = dg0;
        double a_hi = 0.0, f_hi = f0, d_hi = dg0;
        bool found = false, zoom = false;
        double a_prev = 0.0, f_prev = f0, d_prev = dg0;
        for (std::size_t ls = 0; ls < opt.max_line_search; ++ls) {
            if (zoom) step = detail::cubic_step(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi);
            x_new = x + step * d;
            f_new = fg(x_new, g_new);
            const double dg = g_new.dot(d);
            if (std::isfinite(f_new) && f_new <= f0 + opt.approx_eps * std::abs(f0) &&
                (2.0 * opt.c1 - 1.0) * dg0 >= dg && dg >= opt.c2 * dg0) {
                found = true;
                break;
            }
            if (!zoom) {
                if (!std::isfinite(f_new) || f_new > f0 + opt.c1 * step * dg0 || (ls > 0 && f_new >= f_prev)) {
                    a_lo = a_prev, f_lo = f_prev, d_lo = d_prev;
                    a_hi = step, f_hi = std::isfinite(f_new) ? f_new : std::numeric_limits<double>::max(),
                    d_hi = std::isfinite(dg) ? dg : 0.0;
                    zoom = true;
                    continue;
                }
                if (std::abs(dg) <= -opt.c2 * dg0) {
                    found = true;
                    break;
                }
                if (dg >= 0.0) {
                    a_lo = step, f_lo = f_new, d_lo = dg;
                    a_hi = a_prev, f_hi = f_prev, d_hi = d_prev;
                    zoom = true;
                    continue;
                }
                a_prev = step, f_prev = f_new, d_prev = dg;
                step *= 2.0;
            } else {
                if (!std::isfinite(f_new) || f_new > f0 + opt.c1 * step * dg0 || f_new >= f_lo) {
                    a_hi = step, f_hi = std::isfinite(f_new) ? f_new : std::numeric_limits<double>::max(),
                    d_hi = std::isfinite(dg) ? dg : 0.0;
                } else {
                    if (std::abs(dg) <= -opt.c2 * dg0) {
                        found = true;
                        break;
                    }
                    if (dg * (a_hi - a_lo) >= 0.0) a_hi = a_lo, f_hi = f_lo, d_hi = d_lo;
                    a_lo = step, f_lo = f_new, d_lo = dg;
                }
                if (std::abs(a_hi - a_lo) <= 1e-16 * std::max(1.0, std::abs(a_lo))) break;
            }
        }
        if (!found) {
            // Accept the best sufficient-decrease point seen, if any.
            if (a_lo > 0.0 && f_lo < f0) {
                x_new = x + a_lo * d;
                f_new = fg(x_new, g_new);
            } else {
                return finish(LbfgsStatus::kLineSearch);
            }
        }

        V s = x_new - x;
        V y = g_new - g;
        x = x_new;
        g = g_new;
        f = f_new;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > opt.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        if (opt.rel_ftol > 0.0 && f0 - f <= opt.rel_ftol * std::abs(f)) {
            res.iterations = it + 1;
            return finish(LbfgsStatus::kObjective);
        }
    }
    res.iterations = opt.max_iter;
    if (g.norm() <= opt.grad_tol * (1.0 + std::abs(f))) return finish(LbfgsStatus::kGradient);
    return finish(LbfgsStatus::kMaxIter);
}

} // namespace mar
