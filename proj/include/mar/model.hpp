#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mar/linalg.hpp"

namespace mar {

/// Sign used inside the B-update bracket of the Burg alternation.
/// kPlus follows from differentiating the summed forward/backward error;
/// kMinus reproduces the bracket as printed in the closed-form display and
/// is kept only for comparison.
enum class BurgBSign { kPlus, kMinus };

struct FitOptions {
    std::size_t max_iter = 2000;
    double tol = 1e-14;                    // relative objective change; scaled gradient norm for Yule-Walker
    std::optional<std::uint64_t> seed;    // random initial A, B when set
    bool normalize = true;                 // ||A_i||_F = 1 with canonical sign
    BurgBSign burg_b_sign = BurgBSign::kPlus;

    void validate() const {
        if (!(tol > 0.0)) throw model_error("FitOptions: tol must be positive");
        if (max_iter < 1) throw model_error("FitOptions: max_iter must be at least 1");
    }
};

struct FitInfo {
    bool converged = true;
    std::size_t iterations = 0;
    bool used_pinv = false;               // a singular system was solved with the pseudo-inverse
    double objective = 0.0;               // final objective of the iterative solver, when there is one
    std::vector<double> nkp_residuals;    // per-lag Kronecker approximation error, when NKP was used
    std::vector<double> objective_trace;  // objective after each sweep of an alternating solver
};

/// One lag of a matrix autoregression: the term A X_{t-i} B^T.
struct MarTerm {
    Mat a;  // m x m
    Mat b;  // n x n
};

/// X_t - mean = sum_i A_i (X_{t-i} - mean) B_i^T + Z_t, Cov(vec Z_t) = sigma.
struct MarModel {
    Index m = 0;
    Index n = 0;
    std::vector<MarTerm> terms;
    Mat sigma;  // mn x mn
    Mat mean;   // m x n
    FitInfo info;

    std::size_t order() const noexcept { return terms.size(); }

    /// Vectorized coefficient kron(B_i, A_i) of lag i (1-based).
    Mat phi(std::size_t lag) const { return kron(terms.at(lag - 1).b, terms.at(lag - 1).a); }
};

/// vec(X_t) - mean = phi (vec(X_{t-1}) - mean) + e_t, Cov(e_t) = sigma.
struct VarModel {
    Mat phi;    // d x d
    Mat sigma;  // d x d
    Vec mean;   // d
    FitInfo info;

    Index dim() const noexcept { return phi.rows(); }
};

/// Rescales (A, B) -> (A/c, cB) with c = ||A||_F, then flips both signs so
/// that A's largest-magnitude entry is nonnegative. kron(B, A) is unchanged.
inline void normalize_term(MarTerm& term) {
    const double c = term.a.norm();
    if (c == 0.0) {
        term.a = Mat::Identity(term.a.rows(), term.a.cols()) / std::sqrt(static_cast<double>(term.a.rows()));
        term.b.setZero();
        return;
    }
    term.a /= c;
    term.b *= c;
    if (canonical_sign(term.a)) term.b = -term.b;
}

} // namespace mar
