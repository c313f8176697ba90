#pragma once

// Dense linear-algebra primitives: Kronecker product, column-stacking
// vectorization, spectral radius, Moore-Penrose inverse and the nearest
// Kronecker product factorization.
//
// All matrices are Eigen::MatrixXd, which is column-major; vec() is therefore
// a plain reshape of the underlying storage.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "mar/error.hpp"

namespace mar {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

inline std::string shape_str(const Mat& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

inline bool all_finite(const Mat& a) { return a.allFinite(); }

inline void require_finite(const Mat& a, const char* what) {
    if (!a.allFinite()) throw data_error(std::string(what) + ": non-finite entry");
}

inline void require_square(const Mat& a, const char* what) {
    if (a.rows() != a.cols())
        throw dimension_error(std::string(what) + ": expected square matrix, got " + shape_str(a));
}

/// Kronecker product; block (i,j) of the result is a(i,j) * b.
inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Column-stacking vectorization: [a11..am1, a12..am2, ...]^T.
inline Mat vec(const Mat& a) {
    return Eigen::Map<const Mat>(a.data(), a.size(), 1);
}

inline Mat unvec(const Mat& v, Index rows, Index cols) {
    if (v.size() != rows * cols)
        throw dimension_error("unvec: " + std::to_string(v.size()) + " entries cannot form " +
                              std::to_string(rows) + "x" + std::to_string(cols));
    Mat col = v;  // copy so that row vectors are accepted as well
    return Eigen::Map<const Mat>(col.data(), rows, cols);
}

/// Largest eigenvalue modulus, via a Hessenberg/real-Schur eigensolver.
inline double spectral_radius(const Mat& a) {
    require_square(a, "spectral_radius");
    if (a.size() == 0) return 0.0;
    if (a.rows() == 1) return std::abs(a(0, 0));
    Eigen::EigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw error("spectral_radius: eigenvalue iteration failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Moore-Penrose pseudo-inverse. Singular values below
/// max(rows, cols) * sigma_max * 1e-12 are treated as zero.
inline Mat pinv(const Mat& a) {
    if (a.size() == 0) return Mat(a.cols(), a.rows());
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cutoff = static_cast<double>(std::max(a.rows(), a.cols())) * s(0) * 1e-12;
    Vec inv_s = Vec::Zero(s.size());
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff) inv_s(i) = 1.0 / s(i);
    return svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().transpose();
}

/// True when every singular value of `a` clears the pinv cutoff.
inline bool full_rank(const Mat& a) {
    if (a.size() == 0) return true;
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& s = svd.singularValues();
    const double cutoff = static_cast<double>(std::max(a.rows(), a.cols())) * s(0) * 1e-12;
    return s(0) > 0.0 && s(s.size() - 1) > cutoff;
}

/// Flips the sign of `a` (and reports it) so that its largest-magnitude entry,
/// first in column-major order on ties, is nonnegative.
inline bool canonical_sign(Mat& a) {
    if (a.size() == 0) return false;
    Index best = 0;
    for (Index k = 1; k < a.size(); ++k)
        if (std::abs(a.data()[k]) > std::abs(a.data()[best])) best = k;
    if (a.data()[best] < 0.0) {
        a = -a;
        return true;
    }
    return false;
}

struct NkpResult {
    Mat left;             // n x n, carries the scale
    Mat right;            // m x m, unit Frobenius norm
    double residual_fro;  // ||x - kron(left, right)||_F
};

/// Rearranges an (n*m) x (n*m) matrix made of n x n blocks of size m x m into
/// the n^2 x m^2 matrix whose row i + j*n is vec(block(i,j))^T. Under this map
/// kron(L, R) becomes vec(L) vec(R)^T.
inline Mat kron_rearrange(const Mat& x, Index m, Index n) {
    if (x.rows() != m * n || x.cols() != m * n)
        throw dimension_error("kron_rearrange: expected " + std::to_string(m * n) + "x" +
                              std::to_string(m * n) + ", got " + shape_str(x));
    Mat r(n * n, m * m);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) {
            Mat blk = x.block(i * m, j * m, m, m);
            r.row(i + j * n) = Eigen::Map<const Eigen::RowVectorXd>(blk.data(), m * m);
        }
    return r;
}

/// Nearest Kronecker product: the global minimizer of ||x - kron(left, right)||_F
/// with left n x n and right m x m, from the dominant singular pair of the
/// rearranged matrix. right is scaled to unit Frobenius norm with its
/// largest-magnitude entry nonnegative; the scale lives in left.
inline NkpResult nkp(const Mat& x, Index m, Index n) {
    if (m < 1 || n < 1) throw dimension_error("nkp: block sizes must be positive");
    Mat r = kron_rearrange(x, m, n);
    Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    NkpResult out;
    const double sigma = svd.singularValues()(0);
    if (sigma == 0.0) {
        out.right = Mat::Identity(m, m) / std::sqrt(static_cast<double>(m));
        out.left = Mat::Zero(n, n);
    } else {
        Mat u = svd.matrixU().col(0);
        Mat v = svd.matrixV().col(0);
        out.right = unvec(v, m, m);
        out.right /= out.right.norm();
        out.left = unvec(sigma * u, n, n);
        if (canonical_sign(out.right)) out.left = -out.left;
    }
    out.residual_fro = (x - kron(out.left, out.right)).norm();
    return out;
}

/// (M)^2 := M^T M, the squared-matrix shorthand used by the Burg updates.
inline Mat gram(const Mat& a) { return a.transpose() * a; }

/// Symmetric part (a + a^T) / 2.
inline Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }

/// Smallest eigenvalue of the symmetric part of `a`.
inline double min_sym_eigenvalue(const Mat& a) {
    require_square(a, "min_sym_eigenvalue");
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// Symmetrizes and clips negative eigenvalues to zero.
inline Mat nearest_psd(const Mat& a) {
    require_square(a, "nearest_psd");
    if (a.size() == 0) return a;
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(a));
    Vec lam = es.eigenvalues().cwiseMax(0.0);
    Mat out = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    return symmetrize(out);
}

} // namespace mar
