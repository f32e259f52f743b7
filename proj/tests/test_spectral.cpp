#include "oracles.hpp"
#include "stationarity/spectral.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace stationarity;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(FourierFrequency, Values) {
    EXPECT_DOUBLE_EQ(fourier_frequency(1, 8), std::numbers::pi / 4);
    EXPECT_DOUBLE_EQ(fourier_frequency(8, 8), 2 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(fourier_frequency(4, 8), std::numbers::pi);
    EXPECT_THROW((void)fourier_frequency(0, 8), DomainError);
    EXPECT_THROW((void)fourier_frequency(9, 8), DomainError);
}

TEST(Periodogram, ZeroSeries) {
    const MultivariateSeries z(Eigen::MatrixXd::Zero(8, 2));
    for (std::size_t k = 1; k <= 8; ++k) EXPECT_EQ(max_abs(periodogram_matrix(z, 8, k).entries), 0.0);
}

TEST(Periodogram, TwoPointAtNyquist) {
    Eigen::MatrixXd m(2, 1);
    m << 1, -1;
    const auto p = periodogram_matrix(MultivariateSeries(m), 2, 1);
    EXPECT_NEAR(p.entries(0, 0).real(), 1.0 / std::numbers::pi, 1e-15);
    EXPECT_NEAR(p.entries(0, 0).imag(), 0.0, 1e-15);
    EXPECT_EQ(p.base, 2u);
}

TEST(Periodogram, BaseChecks) {
    const auto x = oracle::gaussian(9, 1, 1);
    EXPECT_THROW((void)periodogram_matrix(x, 7, 1), DomainError);
    EXPECT_THROW((void)periodogram_matrix(x, 10, 1), DomainError);
    EXPECT_NO_THROW((void)periodogram_matrix(x, 8, 1));
}

TEST(Periodogram, MatchesDoubleSumAtT32) {
    const auto x = oracle::gaussian(32, 2, 7);
    for (std::size_t k = 1; k <= 32; ++k) {
        EXPECT_LE(max_abs(periodogram_matrix(x, 32, k).entries - oracle::periodogram(x, 32, k)), 1e-10) << k;
    }
}

TEST(Periodogram, FastPathMatchesDirectForAllSmallBases) {
    const auto x = oracle::gaussian(128, 2, 11);
    for (std::size_t n = 2; n <= 128; n += 2) {
        const auto fast = finite_fourier_transform(x, n);
        for (std::size_t a = 0; a < 2; ++a) {
            std::vector<cdouble> col(n);
            for (std::size_t s = 0; s < n; ++s) col[s] = x(s, a);
            const auto direct = detail::dft_direct(col);
            for (std::size_t k = 0; k < n; ++k) {
                ASSERT_LE(std::abs(fast(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a)) - direct[k]), 1e-10)
                    << "n=" << n << " k=" << k;
            }
        }
    }
    for (const std::size_t n : {6u, 16u, 24u}) {
        for (std::size_t k = 1; k <= n; ++k) {
            EXPECT_LE(max_abs(periodogram_matrix(x, n, k).entries - oracle::periodogram(x, n, k)), 1e-10);
        }
    }
}

TEST(Periodogram, ParsevalOnRandomSeries) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t n = 8 + 2 * (seed % 29);
        const auto x = oracle::gaussian(n, 1 + seed % 3, seed);
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(x.dim()), static_cast<Eigen::Index>(x.dim()));
        for (std::size_t k = 1; k <= n; ++k) sum += periodogram_matrix(x, n, k).entries;
        sum *= 2.0 * std::numbers::pi / static_cast<double>(n);
        const Eigen::MatrixXd time = x.values().transpose() * x.values() / static_cast<double>(n);
        ASSERT_LE(max_abs(sum - time.cast<cdouble>()), 1e-10) << seed;
    }
}

TEST(Periodogram, HermitianAndConjugateSymmetric) {
    const auto x = oracle::gaussian(64, 3, 5);
    for (std::size_t k = 1; k < 64; ++k) {
        const auto p = periodogram_matrix(x, 64, k).entries;
        const double scale = p.trace().real();
        EXPECT_LE(max_abs(p - p.adjoint()), 1e-12 * scale);
        for (Eigen::Index a = 0; a < 3; ++a) EXPECT_GE(p(a, a).real(), 0.0);
        const auto mirror = periodogram_matrix(x, 64, 64 - k).entries;
        EXPECT_LE(max_abs(mirror - p.conjugate()), 1e-10);
    }
}

TEST(Periodogram, ScaleEquivariance) {
    const auto x = oracle::gaussian(32, 2, 3);
    const double c = 3.7;
    for (std::size_t k = 1; k <= 16; ++k) {
        const auto p = periodogram_matrix(x, 32, k).entries;
        const auto q = periodogram_matrix(x.scaled(c), 32, k).entries;
        EXPECT_LE(max_abs(q - c * c * p), 1e-12 * c * c * max_abs(p));
    }
}

TEST(CumulativePeriodogram, PartialSums) {
    const auto x = oracle::gaussian(16, 2, 9);
    const auto cp = cumulative_periodogram(x, 16);
    EXPECT_EQ(cp.half(), 8u);
    EXPECT_EQ(max_abs(cp.partial_sum(0)), 0.0);
    EXPECT_LE(max_abs(cp.partial_sum(1) - periodogram_matrix(x, 16, 1).entries), 1e-15);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
    for (std::size_t m = 1; m <= 8; ++m) {
        acc += oracle::periodogram(x, 16, m);
        EXPECT_LE(max_abs(cp.partial_sum(m) - acc), 1e-10);
    }
    EXPECT_THROW((void)cp.partial_sum(9), DomainError);
}

TEST(CumulativePeriodogram, UsesPrefixOfSeries) {
    const auto x = oracle::gaussian(32, 1, 4);
    const auto cp = cumulative_periodogram(x, 8);
    const auto y = x.head(8);
    for (std::size_t m = 1; m <= 4; ++m) {
        EXPECT_LE(max_abs(cp.partial_sum(m) - cumulative_periodogram(y, 8).partial_sum(m)), 1e-14);
    }
}
