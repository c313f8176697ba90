#pragma once

// Synthetic data: random stable VAR(1) coefficients, random PSD noise
// covariances and Gaussian VAR(1)/MAR(1) recursions started from zero.

#include <cstdint>
#include <string>
#include <variant>

#include "mar/linalg.hpp"
#include "mar/random.hpp"
#include "mar/series.hpp"

namespace mar {

inline constexpr std::size_t default_burn_in = 200;

/// phi_raw with iid N(0,1) entries, rescaled to phi_raw / (rho(phi_raw) + 1).
inline Mat random_stable_phi(Index d, Rng& rng) {
    if (d < 1) throw dimension_error("random_stable_phi: d must be positive");
    Mat raw = rng.normal_matrix(d, d);
    return raw / (spectral_radius(raw) + 1.0);
}

inline Mat random_stable_phi(Index d, std::uint64_t seed) {
    Rng rng(seed);
    return random_stable_phi(d, rng);
}

/// S with iid N(0,1) entries, S_sym = (S + S^T)/2 = Q diag(l) Q^T,
/// result Q diag(|l|) Q^T, symmetrized exactly.
inline Mat random_psd_sigma(Index d, Rng& rng) {
    if (d < 1) throw dimension_error("random_psd_sigma: d must be positive");
    Mat s = rng.normal_matrix(d, d);
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(s));
    const Mat& q = es.eigenvectors();
    Mat sigma = q * es.eigenvalues().cwiseAbs().asDiagonal() * q.transpose();
    return symmetrize(sigma);
}

inline Mat random_psd_sigma(Index d, std::uint64_t seed) {
    Rng rng(seed);
    return random_psd_sigma(d, rng);
}

/// L with L L^T = sigma: Cholesky when sigma is positive definite, otherwise
/// Q sqrt(max(l, 0)) from the symmetric eigendecomposition.
inline Mat noise_factor(const Mat& sigma) {
    require_square(sigma, "noise_factor");
    Eigen::LLT<Mat> llt(sigma);
    if (llt.info() == Eigen::Success) {
        Mat l = llt.matrixL();
        if (l.allFinite() && l.diagonal().minCoeff() > 0.0) return l;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(sigma));
    return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

/// d x T matrix of X_t = phi X_{t-1} + L z_t, X_0 = 0, with the first
/// burn_in states discarded. Noise is drawn from `rng` one d-vector per step.
inline Mat generate_var1(const Mat& phi, const Mat& sigma, std::size_t T, std::size_t burn_in, Rng& rng) {
    require_square(phi, "generate_var1");
    if (sigma.rows() != phi.rows() || sigma.cols() != phi.cols())
        throw dimension_error("generate_var1: sigma " + shape_str(sigma) + " does not match phi " + shape_str(phi));
    if (T < 1) throw data_error("generate_var1: T must be at least 1");
    if (!(spectral_radius(phi) < 1.0)) throw model_error("generate_var1: phi is not stable (rho >= 1)");
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    if (!(sigma - sigma.transpose()).isZero(1e-12 * scale) || min_sym_eigenvalue(sigma) < -1e-10 * scale)
        throw model_error("generate_var1: sigma is not symmetric positive semi-definite");

    const Index d = phi.rows();
    const Mat l = noise_factor(sigma);
    Vec x = Vec::Zero(d);
    Mat out(d, static_cast<Index>(T));
    for (std::size_t step = 0; step < burn_in + T; ++step) {
        Vec z = rng.normal_matrix(d, 1);
        x = phi * x + l * z;
        if (step >= burn_in) out.col(static_cast<Index>(step - burn_in)) = x;
    }
    return out;
}

inline Mat generate_var1(const Mat& phi, const Mat& sigma, std::size_t T, std::size_t burn_in,
                         std::uint64_t seed) {
    Rng rng(seed);
    return generate_var1(phi, sigma, T, burn_in, rng);
}

/// X_t = A X_{t-1} B^T + Z_t, realized as generate_var1 with phi = kron(B, A).
inline MatrixSeries generate_mar1(const Mat& a, const Mat& b, const Mat& sigma, Index m, Index n,
                                  std::size_t T, std::size_t burn_in, Rng& rng) {
    if (a.rows() != m || a.cols() != m || b.rows() != n || b.cols() != n)
        throw dimension_error("generate_mar1: A must be m x m and B n x n");
    if (!(spectral_radius(a) * spectral_radius(b) < 1.0))
        throw model_error("generate_mar1: rho(A) * rho(B) >= 1, model is not causal");
    return MatrixSeries::from_columns(generate_var1(kron(b, a), sigma, T, burn_in, rng), m, n);
}

inline MatrixSeries generate_mar1(const Mat& a, const Mat& b, const Mat& sigma, Index m, Index n,
                                  std::size_t T, std::size_t burn_in, std::uint64_t seed) {
    Rng rng(seed);
    return generate_mar1(a, b, sigma, m, n, T, burn_in, rng);
}

struct RandomVar1 {};

struct ExactMar1 {
    Mat a;
    Mat b;
    Mat sigma;
};

struct SimConfig {
    Index m = 1;
    Index n = 1;
    std::size_t T = 100;
    std::size_t burn_in = default_burn_in;
    std::uint64_t seed = 0;
    std::variant<RandomVar1, ExactMar1> mode = RandomVar1{};
};

/// Draws one series according to `cfg`. In RandomVar1 mode phi, sigma and the
/// noise all come from a single stream seeded with cfg.seed, in that order.
inline MatrixSeries simulate(const SimConfig& cfg) {
    Rng rng(cfg.seed);
    if (const auto* exact = std::get_if<ExactMar1>(&cfg.mode))
        return generate_mar1(exact->a, exact->b, exact->sigma, cfg.m, cfg.n, cfg.T, cfg.burn_in, rng);
    const Index d = cfg.m * cfg.n;
    Mat phi = random_stable_phi(d, rng);
    Mat sigma = random_psd_sigma(d, rng);
    return MatrixSeries::from_columns(generate_var1(phi, sigma, cfg.T, cfg.burn_in, rng), cfg.m, cfg.n);
}

} // namespace mar
