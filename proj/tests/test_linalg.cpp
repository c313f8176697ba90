#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mar/linalg.hpp"
#include "test_util.hpp"

using mar::Index;
using mar::Mat;
using testutil::max_abs_diff;
using testutil::randn;

// Independent block-loop Kronecker product.
static Mat kron_loop(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            for (Index k = 0; k < b.rows(); ++k)
                for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

TEST(Kron, IdentityAndScalar) {
    EXPECT_EQ(mar::kron(Mat::Identity(2, 2), Mat::Identity(3, 3)), Mat::Identity(6, 6));
    const Mat b = randn(3, 4, 1);
    Mat two(1, 1);
    two(0, 0) = 2.0;
    EXPECT_EQ(mar::kron(two, b), 2.0 * b);
}

TEST(Kron, BlockDefinition) {
    const Mat a = randn(2, 3, 2), b = randn(4, 2, 3);
    EXPECT_EQ(mar::kron(a, b), kron_loop(a, b));
}

TEST(Kron, MixedProduct) {
    mar::Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const Mat a = randn(2, 2, rng), b = randn(2, 2, rng), c = randn(3, 3, rng), d = randn(3, 3, rng);
        EXPECT_LT(max_abs_diff(mar::kron(a, c) * mar::kron(b, d), mar::kron(a * b, c * d)), 1e-12);
    }
}

TEST(Vec, ColumnStacking) {
    Mat a(2, 2);
    a << 1, 3, 2, 4;
    Mat expect(4, 1);
    expect << 1, 2, 3, 4;
    EXPECT_EQ(mar::vec(a), expect);
    const Mat col = randn(5, 1, 4);
    EXPECT_EQ(mar::vec(col), col);
}

TEST(Vec, ThreeMatrixProduct) {
    mar::Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const Mat a = randn(2, 3, rng), b = randn(3, 3, rng), c = randn(3, 2, rng);
        EXPECT_LT(max_abs_diff(mar::vec(a * b * c), mar::kron(c.transpose(), a) * mar::vec(b)), 1e-12);
    }
}

TEST(Unvec, InverseOfVec) {
    Mat v(4, 1);
    v << 1, 2, 3, 4;
    Mat expect(2, 2);
    expect << 1, 3, 2, 4;
    EXPECT_EQ(mar::unvec(v, 2, 2), expect);
    const Mat a = randn(3, 5, 5);
    EXPECT_EQ(mar::unvec(mar::vec(a), 3, 5), a);
    EXPECT_THROW(mar::unvec(v, 3, 2), mar::dimension_error);
}

TEST(SpectralRadius, Basics) {
    EXPECT_NEAR(mar::spectral_radius(Mat::Identity(4, 4)), 1.0, 1e-14);
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 0.5;
    d(1, 1) = -0.9;
    EXPECT_NEAR(mar::spectral_radius(d), 0.9, 1e-14);
    EXPECT_THROW(mar::spectral_radius(Mat::Zero(2, 3)), mar::dimension_error);
    // Rotation: complex eigenvalues of modulus 0.7.
    Mat r(2, 2);
    r << 0.0, -0.7, 0.7, 0.0;
    EXPECT_NEAR(mar::spectral_radius(r), 0.7, 1e-12);
}

TEST(SpectralRadius, KroneckerProduct) {
    mar::Rng rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        const Mat a = randn(3, 3, rng), b = randn(3, 3, rng);
        const double expect = mar::spectral_radius(a) * mar::spectral_radius(b);
        EXPECT_NEAR(mar::spectral_radius(mar::kron(b, a)), expect, 1e-8 * expect);
    }
}

TEST(SpectralRadius, SimilarityInvariant) {
    mar::Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const Mat a = randn(4, 4, rng);
        const Mat p = randn(4, 4, rng) + 4.0 * Mat::Identity(4, 4);
        const Mat sim = p * a * p.inverse();
        EXPECT_NEAR(mar::spectral_radius(sim), mar::spectral_radius(a), 1e-6);
    }
}

static void expect_penrose(const Mat& a, double tol) {
    const Mat x = mar::pinv(a);
    EXPECT_LT(max_abs_diff(a * x * a, a), tol);
    EXPECT_LT(max_abs_diff(x * a * x, x), tol);
    EXPECT_LT(max_abs_diff((a * x).transpose(), a * x), tol);
    EXPECT_LT(max_abs_diff((x * a).transpose(), x * a), tol);
}

TEST(Pinv, Basics) {
    EXPECT_LT(max_abs_diff(mar::pinv(Mat::Identity(3, 3)), Mat::Identity(3, 3)), 1e-15);
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 2.0;
    Mat expect = Mat::Zero(2, 2);
    expect(0, 0) = 0.5;
    EXPECT_LT(max_abs_diff(mar::pinv(d), expect), 1e-15);
    const Mat a = randn(4, 4, 19);
    EXPECT_LT(max_abs_diff(mar::pinv(a), a.inverse()), 1e-9);
}

TEST(Pinv, PenroseConditionsAllRanks) {
    mar::Rng rng(23);
    for (Index rows : {3, 4, 6})
        for (Index cols : {2, 4, 5})
            for (Index r = 1; r <= std::min(rows, cols); ++r) {
                const Mat a = randn(rows, r, rng) * randn(r, cols, rng);
                expect_penrose(a, 1e-8);
            }
}

TEST(Nkp, ExactKroneckerInput) {
    mar::Rng rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        const Mat a = randn(2, 2, rng), b = randn(3, 3, rng);
        const mar::NkpResult r = mar::nkp(mar::kron(b, a), 2, 3);
        EXPECT_LT(r.residual_fro, 1e-10);
        EXPECT_NEAR(r.right.norm(), 1.0, 1e-12);
        // Same pair up to the sign fixed by the convention.
        const double s = (r.right.array() * a.array()).sum() >= 0 ? 1.0 : -1.0;
        EXPECT_LT(max_abs_diff(r.right, s * a / a.norm()), 1e-10);
        EXPECT_LT(max_abs_diff(r.left, s * b * a.norm()), 1e-10);
        EXPECT_LT(max_abs_diff(mar::kron(r.left, r.right), mar::kron(b, a)), 1e-10);
    }
}

TEST(Nkp, Identity) {
    const mar::NkpResult r = mar::nkp(Mat::Identity(6, 6), 2, 3);
    EXPECT_LT(max_abs_diff(r.left, Mat::Identity(3, 3) * std::sqrt(2.0)), 1e-12);
    EXPECT_LT(max_abs_diff(r.right, Mat::Identity(2, 2) / std::sqrt(2.0)), 1e-12);
    EXPECT_LT(r.residual_fro, 1e-12);
}

TEST(Nkp, SignConvention) {
    mar::Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const mar::NkpResult r = mar::nkp(randn(6, 6, rng), 3, 2);
        Index i, j;
        r.right.cwiseAbs().maxCoeff(&i, &j);
        EXPECT_GE(r.right(i, j), 0.0);
    }
}

TEST(Nkp, ResidualMatchesDefinition) {
    mar::Rng rng(37);
    for (int rep = 0; rep < 10; ++rep) {
        const Mat x = randn(12, 12, rng);
        const mar::NkpResult r = mar::nkp(x, 3, 4);
        EXPECT_NEAR(r.residual_fro, (x - mar::kron(r.left, r.right)).norm(), 1e-12);
    }
    EXPECT_THROW(mar::nkp(Mat::Zero(6, 6), 2, 2), mar::dimension_error);
}

TEST(Nkp, BeatsGridSearch) {
    // Perturbed 2x2 / 2x2 instance against a coarse grid over (A0, B0).
    mar::Rng rng(41);
    const Mat a = randn(2, 2, rng), b = randn(2, 2, rng);
    const Mat x = mar::kron(b, a) + 0.3 * randn(4, 4, rng);
    const double best = mar::nkp(x, 2, 2).residual_fro;
    const double grid[] = {-1.5, -0.75, 0.0, 0.75, 1.5};
    double grid_best = INFINITY;
    Mat a0(2, 2), b0(2, 2);
    for (int ia = 0; ia < 625; ++ia) {
        a0 << grid[ia % 5], grid[ia / 5 % 5], grid[ia / 25 % 5], grid[ia / 125];
        for (int ib = 0; ib < 625; ++ib) {
            b0 << grid[ib % 5], grid[ib / 5 % 5], grid[ib / 25 % 5], grid[ib / 125];
            grid_best = std::min(grid_best, (x - mar::kron(b0, a0)).norm());
        }
    }
    EXPECT_LE(best, grid_best);
}

TEST(Nkp, NeverWorseThanGeneratingPair) {
    mar::Rng rng(43);
    for (int rep = 0; rep < 50; ++rep) {
        const Mat a = randn(3, 3, rng), b = randn(2, 2, rng);
        const Mat x = mar::kron(b, a) + 0.5 * randn(6, 6, rng);
        EXPECT_LE(mar::nkp(x, 3, 2).residual_fro, (x - mar::kron(b, a)).norm() + 1e-12);
    }
}

TEST(Nkp, ZeroInput) {
    const mar::NkpResult r = mar::nkp(Mat::Zero(4, 4), 2, 2);
    EXPECT_NEAR(r.right.norm(), 1.0, 1e-15);
    EXPECT_TRUE(r.left.isZero(0.0));
    EXPECT_EQ(r.residual_fro, 0.0);
}

TEST(NearestPsd, ClipsNegativeEigenvalues) {
    Mat s(2, 2);
    s << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
    const Mat p = mar::nearest_psd(s);
    EXPECT_GE(mar::min_sym_eigenvalue(p), -1e-12);
    Mat expect(2, 2);
    expect << 1.5, 1.5, 1.5, 1.5;
    EXPECT_LT(max_abs_diff(p, expect), 1e-12);
}
