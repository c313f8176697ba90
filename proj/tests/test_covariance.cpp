#include <gtest/gtest.h>

#include "mar/covariance.hpp"
#include "mar/simulation.hpp"
#include "test_util.hpp"

using mar::Index;
using mar::Mat;
using mar::MatrixSeries;
using testutil::max_abs_diff;
using testutil::randn;

static MatrixSeries random_series(Index m, Index n, std::size_t T, std::uint64_t seed) {
    mar::Rng rng(seed);
    std::vector<Mat> data;
    for (std::size_t t = 0; t < T; ++t) data.push_back(rng.normal_matrix(m, n));
    return MatrixSeries(m, n, std::move(data));
}

// (1/T) sum_t (X_t - mean) (x) (X_{t-k} - mean)^T computed directly.
static Mat direct_kron_average(const MatrixSeries& s, long k) {
    const Mat mu = s.mean();
    Mat out = Mat::Zero(s.dim(), s.dim());
    for (std::size_t t = static_cast<std::size_t>(k); t < s.size(); ++t)
        out += mar::kron(s[t] - mu, (s[t - static_cast<std::size_t>(k)] - mu).transpose());
    return out / static_cast<double>(s.size());
}

TEST(SampleGammaVec, ConstantSeriesIsZero) {
    const Mat c = randn(2, 3, 1);
    const MatrixSeries s(2, 3, std::vector<Mat>(10, c));
    for (long k = -3; k <= 3; ++k) EXPECT_TRUE(mar::sample_gamma_vec(s, k).isZero(1e-14));
}

TEST(SampleGammaVec, DefinitionAndSymmetry) {
    const MatrixSeries s = random_series(2, 2, 30, 3);
    const Mat cols = s.as_columns();
    const mar::Vec mu = cols.rowwise().mean();
    Mat expect = Mat::Zero(4, 4);
    for (Index t = 1; t < 30; ++t) expect += (cols.col(t) - mu) * (cols.col(t - 1) - mu).transpose();
    expect /= 30.0;
    EXPECT_LT(max_abs_diff(mar::sample_gamma_vec(s, 1), expect), 1e-14);
    EXPECT_EQ(mar::sample_gamma_vec(s, -1), mar::sample_gamma_vec(s, 1).transpose());
    EXPECT_THROW(mar::sample_gamma_vec(s, 30), mar::data_error);
    EXPECT_THROW(mar::sample_gamma_vec(s, -30), mar::data_error);
}

TEST(SampleGammaVec, IidLagZeroNearIdentity) {
    const MatrixSeries s = random_series(2, 2, 100000, 5);
    EXPECT_LT(max_abs_diff(mar::sample_gamma_vec(s, 0), Mat::Identity(4, 4)), 0.05);
}

TEST(SampleGammaVec, LagZeroIsPsd) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const MatrixSeries s = random_series(3, 2, 8, seed);  // T < d: rank deficient
        const Mat g = mar::sample_gamma_vec(s, 0);
        EXPECT_EQ(g, g.transpose());
        EXPECT_GE(mar::min_sym_eigenvalue(g), -1e-10);
    }
}

TEST(GammaKron, ScalarIsIdentityMap) {
    Mat g(1, 1);
    g(0, 0) = 3.25;
    EXPECT_EQ(mar::gamma_kron(g, 1, 1), g);
}

TEST(GammaKron, OuterProductOfVecsIsKronecker) {
    mar::Rng rng(7);
    for (Index m = 1; m <= 4; ++m)
        for (Index n = 1; n <= 4; ++n)
            for (int rep = 0; rep < 5; ++rep) {
                const Mat x = randn(m, n, rng), y = randn(m, n, rng);
                const Mat g = mar::vec(x) * mar::vec(y).transpose();
                EXPECT_EQ(mar::gamma_kron(g, m, n), mar::kron(x, y.transpose())) << m << "x" << n;
            }
}

TEST(GammaKron, SquareFactors) {
    mar::Rng rng(9);
    for (Index m = 1; m <= 4; ++m) {
        const Mat a = randn(m, m, rng), b = randn(m, m, rng);
        EXPECT_EQ(mar::gamma_kron(mar::vec(a) * mar::vec(b.transpose()).transpose(), m, m), mar::kron(a, b));
    }
}

TEST(GammaKron, BijectiveAndInvertible) {
    mar::Rng rng(11);
    for (Index m = 1; m <= 4; ++m)
        for (Index n = 1; n <= 4; ++n) {
            // Distinct labels: the permutation must move every label exactly once.
            Mat labels(m * n, m * n);
            for (Index i = 0; i < labels.size(); ++i) labels(i) = static_cast<double>(i);
            const Mat moved = mar::gamma_kron(labels, m, n);
            std::vector<int> seen(static_cast<std::size_t>(labels.size()), 0);
            for (Index i = 0; i < moved.size(); ++i) ++seen[static_cast<std::size_t>(moved(i))];
            for (int c : seen) EXPECT_EQ(c, 1);
            const Mat g = randn(m * n, m * n, rng);
            EXPECT_EQ(mar::gamma_vec_from_kron(mar::gamma_kron(g, m, n), m, n), g);
            EXPECT_EQ(mar::gamma_kron(mar::gamma_vec_from_kron(g, m, n), m, n), g);
        }
    EXPECT_THROW(mar::gamma_kron(Mat::Zero(5, 5), 2, 2), mar::dimension_error);
}

TEST(SampleGammaKron, MatchesDirectKroneckerAverage) {
    std::uint64_t seed = 100;
    for (Index m = 1; m <= 4; ++m)
        for (Index n = 1; n <= 4; ++n) {
            const MatrixSeries s = random_series(m, n, 50, ++seed);
            for (long k : {0L, 1L, 2L}) {
                const Mat got = mar::sample_gamma_kron(s, k);
                EXPECT_LT(max_abs_diff(got, direct_kron_average(s, k)), 1e-12) << m << "x" << n << " k=" << k;
            }
        }
}

TEST(SampleGammaKron, ZeroAndScalarCases) {
    const MatrixSeries zero(2, 3, std::vector<Mat>(5, Mat::Zero(2, 3)));
    EXPECT_TRUE(mar::sample_gamma_kron(zero, 1).isZero(0.0));

    const MatrixSeries s = random_series(1, 1, 40, 13);
    double mu = 0.0;
    for (std::size_t t = 0; t < 40; ++t) mu += s[t](0, 0);
    mu /= 40.0;
    double g1 = 0.0;
    for (std::size_t t = 1; t < 40; ++t) g1 += (s[t](0, 0) - mu) * (s[t - 1](0, 0) - mu);
    EXPECT_NEAR(mar::sample_gamma_kron(s, 1)(0, 0), g1 / 40.0, 1e-15);
}

TEST(KronCovariance, NegativeLagFromPositive) {
    const MatrixSeries s = random_series(2, 3, 40, 17);
    const mar::KronCovariance kc = mar::sample_kron_covariance(s, 2);
    for (long k = 0; k <= 2; ++k) {
        EXPECT_EQ(kc.at(k), mar::sample_gamma_kron(s, k));
        EXPECT_EQ(kc.at(-k), mar::sample_gamma_kron(s, -k));
        EXPECT_EQ(kc.negated(k), kc.at(-k));
        // Gamma_{-k} in Kronecker order is the permuted transpose of Gamma_k in vec order.
        EXPECT_EQ(kc.at(-k), mar::gamma_kron(mar::gamma_vec_from_kron(kc.at(k), 2, 3).transpose(), 2, 3));
    }
}
