#include "oracles.hpp"
#include "stationarity/models.hpp"
#include "stationarity/var.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace stationarity;

namespace {

MultivariateSeries ar1(double phi, std::size_t t, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return generate(model_preset("ar1", phi), t, rng);
}

MultivariateSeries ar2(std::size_t t, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(t), 1);
    double x1 = 0.0, x2 = 0.0;
    for (std::size_t s = 0; s < t + 200; ++s) {
        const double x = 0.5 * x1 - 0.4 * x2 + n(rng);
        x2 = x1;
        x1 = x;
        if (s >= 200) m(static_cast<Eigen::Index>(s - 200), 0) = x;
    }
    return MultivariateSeries(m);
}

AutocovarianceSequence exact_ar1(double phi, std::size_t lags) {
    AutocovarianceSequence a;
    a.t_len = 1000;
    for (std::size_t h = 0; h <= lags; ++h) {
        a.lags.push_back(Eigen::MatrixXd::Constant(1, 1, std::pow(phi, static_cast<double>(h)) / (1 - phi * phi)));
    }
    return a;
}

}  // namespace

TEST(Autocov, ZeroSeries) {
    const auto a = sample_autocov(MultivariateSeries(Eigen::MatrixXd::Zero(10, 2)), 3);
    ASSERT_EQ(a.lags.size(), 4u);
    for (const auto& g : a.lags) EXPECT_EQ(g.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Autocov, AlternatingSeries) {
    Eigen::MatrixXd m(4, 1);
    m << 1, -1, 1, -1;
    const auto a = sample_autocov(MultivariateSeries(m), 1);
    EXPECT_DOUBLE_EQ(a.lags[0](0, 0), 1.0);
    EXPECT_DOUBLE_EQ(a.lags[1](0, 0), -0.75);
}

TEST(Autocov, WhiteNoiseLagZeroNearIdentity) {
    const auto a = sample_autocov(oracle::gaussian(10000, 2, 3), 0);
    EXPECT_LE((a.lags[0] - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(Autocov, LagTooLarge) {
    EXPECT_THROW((void)sample_autocov(oracle::gaussian(10, 1, 1), 10), DomainError);
}

TEST(YuleWalker, WhiteNoiseAutocovariances) {
    AutocovarianceSequence a;
    Eigen::MatrixXd g0(2, 2);
    g0 << 2, 0.5, 0.5, 1;
    a.lags = {g0, Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)};
    const auto m = yule_walker_fit(a, 3);
    for (const auto& c : m.coeffs) EXPECT_LE(c.cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((m.sigma - g0).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(YuleWalker, ExactAr1) {
    const auto m = yule_walker_fit(exact_ar1(0.5, 1), 1);
    EXPECT_NEAR(m.coeffs[0](0, 0), 0.5, 1e-10);
    EXPECT_NEAR(m.sigma(0, 0), 1.0, 1e-10);
    const auto m3 = yule_walker_fit(exact_ar1(0.5, 3), 3);
    EXPECT_NEAR(m3.coeffs[0](0, 0), 0.5, 1e-10);
    EXPECT_NEAR(m3.coeffs[1](0, 0), 0.0, 1e-10);
    EXPECT_NEAR(m3.coeffs[2](0, 0), 0.0, 1e-10);
}

TEST(YuleWalker, SimulatedAr1) {
    const auto x = ar1(0.5, 4096, 17);
    const auto m = yule_walker_fit(sample_autocov(x, 1), 1);
    EXPECT_NEAR(m.coeffs[0](0, 0), 0.5, 0.05);
}

TEST(YuleWalker, LevinsonMatchesBlockToeplitzSolve) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng = make_rng(seed);
        const auto x = generate(model_preset("tv-var"), 200, rng);
        const auto acov = sample_autocov(x, 4);
        for (std::size_t p = 1; p <= 4; ++p) {
            const auto lev = yule_walker_fit(acov, p);
            const auto ref = oracle::yule_walker(acov.lags, p);
            for (std::size_t j = 0; j < p; ++j) EXPECT_LE((lev.coeffs[j] - ref[j]).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_TRUE(is_stable(lev));
        }
    }
}

TEST(YuleWalker, SingularSystem) {
    AutocovarianceSequence a;
    a.lags = {Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::MatrixXd::Constant(1, 1, 1.0)};
    EXPECT_THROW((void)yule_walker_fit(a, 1), DegenerateData);
}

TEST(YuleWalker, FitsAreStable) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = ar1(0.95, 64, seed);
        const auto sel = select_order(x, 0, 6);
        EXPECT_TRUE(is_stable(sel.model));
    }
}

TEST(LeastSquares, ExactLinearDataIsDegenerate) {
    Eigen::MatrixXd m(20, 1);
    m(0, 0) = 1.0;
    for (Eigen::Index i = 1; i < 20; ++i) m(i, 0) = 0.7 * m(i - 1, 0);
    const MultivariateSeries x(m);
    const auto coeffs = least_squares_coefficients(x, 1);
    EXPECT_NEAR(coeffs[0](0, 0), 0.7, 1e-12);
    EXPECT_THROW((void)least_squares_fit(x, 1), DegenerateData);
}

TEST(LeastSquares, WhiteNoiseCoefficientsNearZero) {
    const auto m = least_squares_fit(oracle::gaussian(4096, 2, 5), 1);
    EXPECT_LE(m.coeffs[0].cwiseAbs().maxCoeff(), 0.05);
}

TEST(LeastSquares, RankDeficient) {
    Eigen::MatrixXd m(16, 2);
    const auto g = oracle::gaussian(16, 1, 2);
    m.col(0) = g.values().col(0);
    m.col(1) = 2.0 * g.values().col(0);
    EXPECT_THROW((void)least_squares_coefficients(MultivariateSeries(m), 1), DegenerateData);
}

TEST(Residuals, OrderZeroIsCenteredCovariance) {
    const auto x = oracle::gaussian(50, 2, 9);
    VarModel m;
    m.sigma = Eigen::MatrixXd::Identity(2, 2);
    const Eigen::MatrixXd c = x.values().rowwise() - x.values().colwise().mean();
    EXPECT_LE((residual_covariance(x, m) - c.transpose() * c / 50.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Residuals, DeterministicFitIsNearZero) {
    Eigen::MatrixXd m(20, 1);
    m(0, 0) = 1.0;
    for (Eigen::Index i = 1; i < 20; ++i) m(i, 0) = 0.7 * m(i - 1, 0);
    VarModel model;
    model.order = 1;
    model.coeffs = {Eigen::MatrixXd::Constant(1, 1, 0.7)};
    model.sigma = Eigen::MatrixXd::Identity(1, 1);
    EXPECT_LE(residual_covariance(MultivariateSeries(m), model).norm(), 1e-20);
}

TEST(Residuals, WhiteNoiseNearIdentityAndSymmetric) {
    const auto x = oracle::gaussian(4096, 2, 13);
    const auto model = fit_var(x, 1, Estimator::yule_walker);
    const auto s = residual_covariance(x, model);
    EXPECT_LE((s - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.1);
    EXPECT_LE((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    VarModel bad;
    bad.order = 5000;
    bad.sigma = Eigen::MatrixXd::Identity(2, 2);
    EXPECT_THROW((void)residual_covariance(x, bad), DomainError);
}

TEST(SpectralDensity, WhiteAndAr1) {
    VarModel white;
    white.sigma = Eigen::MatrixXd::Identity(2, 2);
    for (const double l : {0.0, 1.0, 3.0}) {
        EXPECT_LE((var_spectral_density(white, l).entries - Eigen::MatrixXcd::Identity(2, 2) / (2 * std::numbers::pi))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-15);
    }
    VarModel a;
    a.order = 1;
    a.coeffs = {Eigen::MatrixXd::Constant(1, 1, 0.5)};
    a.sigma = Eigen::MatrixXd::Identity(1, 1);
    EXPECT_NEAR(var_spectral_density(a, 0.0).entries(0, 0).real(), 2.0 / std::numbers::pi, 1e-14);
    VarModel unit = a;
    unit.coeffs[0](0, 0) = 1.0;
    EXPECT_THROW((void)var_spectral_density(unit, 0.0), NumericalError);
}

TEST(SpectralDensity, IntegratesToModelAutocovariance) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int rep = 0; rep < 5; ++rep) {
        VarModel m;
        m.order = 2;
        for (int j = 0; j < 2; ++j) {
            Eigen::MatrixXd c(2, 2);
            c << u(rng), u(rng), u(rng), u(rng);
            m.coeffs.push_back(c);
        }
        Eigen::MatrixXd l(2, 2);
        l << 1, 0, u(rng), 1;
        m.sigma = l * l.transpose();
        if (!is_stable(m)) continue;
        const std::size_t n = 1u << 14;
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(2, 2);
        for (std::size_t k = 1; k <= n; ++k) sum += var_spectral_density(m, fourier_frequency(k, n)).entries;
        sum *= 2 * std::numbers::pi / static_cast<double>(n);
        EXPECT_LE((sum.real() - oracle::var_gamma0(m.coeffs, m.sigma)).cwiseAbs().maxCoeff(), 1e-3);
        EXPECT_LE(sum.imag().cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(WhittleAic, PenaltyDifferenceIsOneOverT) {
    const auto x = oracle::gaussian(128, 2, 4);
    auto m = fit_var(x, 1, Estimator::yule_walker);
    m.sigma = residual_covariance(x, m);
    VarModel m2 = m;
    m2.order = 2;
    m2.coeffs.push_back(Eigen::MatrixXd::Zero(2, 2));
    EXPECT_NEAR(whittle_aic(x, m2) - whittle_aic(x, m), 1.0 / 128.0, 1e-12);
    EXPECT_NEAR(whittle_aic(x, m2, AicPenalty::parameters) - whittle_aic(x, m, AicPenalty::parameters), 4.0 / 128.0,
                1e-12);
}

TEST(WhittleAic, DecomposesIntoLikelihoodAndPenalty) {
    const auto x = oracle::gaussian(64, 1, 8);
    const auto m = fit_var(x, 0, Estimator::yule_walker);
    const double aic = whittle_aic(x, m);
    EXPECT_TRUE(std::isfinite(aic));
    EXPECT_NEAR(aic, whittle_likelihood(cumulative_periodogram(x, 64), m), 1e-14);
    EXPECT_NEAR(whittle_aic(x, m, AicPenalty::order, AicScaling::display), 2 * std::numbers::pi * aic, 1e-12);
}

TEST(WhittleAic, PermutationInvariant) {
    Rng rng = make_rng(5);
    const auto x = generate(model_preset("var1"), 128, rng);
    const auto m = fit_var(x, 2, Estimator::yule_walker);
    const auto xp = x.columns({1, 0});
    const auto mp = fit_var(xp, 2, Estimator::yule_walker);
    EXPECT_NEAR(whittle_aic(x, m), whittle_aic(xp, mp), 1e-12);
}

TEST(WhittleAic, TrueOrderBeatsWhiteNoise) {
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto x = ar2(512, seed);
        const auto m0 = fit_var(x, 0, Estimator::yule_walker);
        const auto m2 = fit_var(x, 2, Estimator::yule_walker);
        if (whittle_aic(x, m2) < whittle_aic(x, m0)) ++wins;
    }
    EXPECT_GE(wins, 95);
}

TEST(SelectOrder, WhiteNoisePicksSmallOrders) {
    int small = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        if (select_order(oracle::gaussian(512, 1, seed), 0, default_max_order(512)).order <= 2) ++small;
    }
    EXPECT_GE(small, 80);
}

TEST(SelectOrder, Ar1PicksPositiveOrder) {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        if (select_order(ar1(0.5, 512, seed), 0, default_max_order(512)).order >= 1) ++hits;
    }
    EXPECT_GE(hits, 95);
}

TEST(SelectOrder, SingletonRange) {
    const auto x = oracle::gaussian(64, 1, 1);
    const auto sel = select_order(x, 3, 3);
    EXPECT_EQ(sel.order, 3u);
    EXPECT_EQ(sel.model.order, 3u);
    ASSERT_EQ(sel.aic.size(), 1u);
}

TEST(SelectOrder, RangeChecks) {
    const auto x = oracle::gaussian(16, 1, 1);
    EXPECT_THROW((void)select_order(x, 3, 2), DomainError);
    EXPECT_THROW((void)select_order(x, 0, 8), DomainError);
    EXPECT_EQ(default_max_order(256), 15u);
    EXPECT_EQ(default_max_order(64), 6u);
}

TEST(SelectOrder, AllFitsDegenerate) {
    EXPECT_THROW((void)select_order(MultivariateSeries(Eigen::MatrixXd::Zero(16, 1)), 0, 2), DegenerateData);
}
