#pragma once

#include "stationarity/deviation.hpp"
#include "stationarity/errors.hpp"
#include "stationarity/parallel.hpp"
#include "stationarity/random.hpp"
#include "stationarity/series.hpp"
#include "stationarity/var.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace stationarity {

struct BootstrapConfig {
    std::size_t replicates = 200;
    double alpha = 0.05;
    std::uint64_t seed = 42;
    /// Defaults to 100 + 10 p.
    std::optional<std::size_t> burn_in;
    /// Fixed VAR order; nullopt selects it by Whittle AIC.
    std::optional<std::size_t> order;
    std::size_t p_min = 0;
    /// Defaults to min(floor(T/10), 15).
    std::optional<std::size_t> p_max;
    Estimator estimator = Estimator::yule_walker;
    AicPenalty penalty = AicPenalty::order;
    AicScaling scaling = AicScaling::whittle;
    /// 0 = one per hardware thread. Never affects results.
    std::size_t workers = 1;
};

/// 1-based index floor((1 - alpha) B) of the bootstrap quantile.
[[nodiscard]] inline std::size_t quantile_index(std::size_t replicates, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    // The relative nudge keeps products such as 0.95 * 200 from landing just below an integer.
    const double raw = (1.0 - alpha) * static_cast<double>(replicates);
    return static_cast<std::size_t>(std::floor(raw * (1.0 + 1e-12)));
}

inline void validate(const BootstrapConfig& config) {
    if (config.replicates < 1) throw DomainError("at least one bootstrap replicate is required");
    const auto idx = quantile_index(config.replicates, config.alpha);
    if (idx < 1 || idx > config.replicates) {
        throw DomainError("floor((1 - alpha) B) must lie in 1..B; increase the number of replicates");
    }
}

[[nodiscard]] inline std::size_t default_burn_in(std::size_t order) { return 100 + 10 * order; }

/**
 * Simulates T values of X_t = sum_j a_j X_{t-j} + L Z_t, L L^T = sigma, Z_t iid N(0, I).
 *
 * The recursion starts from zeros and the first `burn_in` values are discarded.
 */
[[nodiscard]] inline MultivariateSeries simulate_var(const VarModel& model, std::size_t t, Rng& rng,
                                                     std::optional<std::size_t> burn_in = std::nullopt) {
    if (t == 0) throw DomainError("cannot simulate an empty series");
    if (!is_stable(model)) {
        throw UnstableModel("fitted VAR is not stable (companion spectral radius " +
                            std::to_string(companion_spectral_radius(model)) +
                            "); refit with the Yule-Walker estimator");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(model.sigma);
    if (llt.info() != Eigen::Success || !detail::is_positive_definite(model.sigma)) {
        throw DegenerateData("innovation covariance is not positive definite");
    }
    const Eigen::MatrixXd chol = llt.matrixL();
    const std::size_t d = model.dim();
    const std::size_t p = model.order;
    const std::size_t burn = burn_in.value_or(default_burn_in(p));
    const std::size_t total = burn + t;
    const auto dd = static_cast<Eigen::Index>(d);

    // Column-major d x (p + total) buffer; the first p columns are the zero initial state.
    Eigen::MatrixXd path = Eigen::MatrixXd::Zero(dd, static_cast<Eigen::Index>(p + total));
    Eigen::VectorXd z(dd);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t s = 0; s < total; ++s) {
        for (Eigen::Index a = 0; a < dd; ++a) z(a) = normal(rng);
        const auto col = static_cast<Eigen::Index>(p + s);
        Eigen::VectorXd x = chol * z;
        for (std::size_t j = 1; j <= p; ++j) x.noalias() += model.coeffs[j - 1] * path.col(col - static_cast<Eigen::Index>(j));
        path.col(col) = x;
    }
    return MultivariateSeries(path.rightCols(static_cast<Eigen::Index>(t)).transpose());
}

/// Per-replicate stream, independent of execution order.
[[nodiscard]] inline std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate) {
    return derive_seed(master, {0x626f6f74ULL, static_cast<std::uint64_t>(replicate)});
}

/**
 * AR-sieve bootstrap statistics D*_{T,r}, r = 1..B, in replicate order.
 *
 * Each replicate simulates T values from `model` and evaluates the statistic on the
 * same grid as the data.
 */
[[nodiscard]] inline std::vector<double> bootstrap_replicates(const MultivariateSeries& series, const VarModel& model,
                                                              const BootstrapConfig& config,
                                                              const EvaluationGrid& grid) {
    if (config.replicates < 1) throw DomainError("at least one bootstrap replicate is required");
    if (series.dim() != model.dim()) throw DomainError("model dimension does not match the series");
    const std::size_t t = series.length();
    std::vector<double> stats(config.replicates, 0.0);
    parallel_for(config.replicates, config.workers, [&](std::size_t r) {
        try {
            Rng rng = make_rng(replicate_seed(config.seed, r + 1));
            const auto sim = simulate_var(model, t, rng, config.burn_in);
            stats[r] = deviation_sup(sim, grid).statistic;
        } catch (const UnstableModel& e) {
            throw UnstableModel("bootstrap replicate " + std::to_string(r + 1) + ": " + e.what());
        } catch (const DegenerateData& e) {
            throw DegenerateData("bootstrap replicate " + std::to_string(r + 1) + ": " + e.what());
        } catch (const Error& e) {
            throw NumericalError("bootstrap replicate " + std::to_string(r + 1) + ": " + e.what());
        }
    });
    return stats;
}

/// floor((1 - alpha) B)-th smallest replicate (1-based).
[[nodiscard]] inline double bootstrap_quantile(std::vector<double> stats, double alpha) {
    if (stats.empty()) throw DomainError("no bootstrap statistics");
    const auto idx = quantile_index(stats.size(), alpha);
    if (idx < 1 || idx > stats.size()) throw DomainError("quantile index floor((1 - alpha) B) is below 1");
    std::nth_element(stats.begin(), stats.begin() + static_cast<std::ptrdiff_t>(idx - 1), stats.end());
    return stats[idx - 1];
}

/// Fraction of replicates at least as large as the observed statistic.
[[nodiscard]] inline double bootstrap_p_value(const std::vector<double>& stats, double statistic) {
    if (stats.empty()) throw DomainError("no bootstrap statistics");
    const auto exceed = std::count_if(stats.begin(), stats.end(), [&](double s) { return s >= statistic; });
    return static_cast<double>(exceed) / static_cast<double>(stats.size());
}

struct GridSummary {
    std::size_t t_len = 0;
    std::size_t t_eff = 0;
    bool dyadic = false;
    std::vector<double> v_values;
};

[[nodiscard]] inline GridSummary summarize(const EvaluationGrid& grid) {
    return {grid.t_len, grid.t_eff, grid.dyadic, grid.v_values()};
}

struct TestReport {
    double statistic = 0.0;
    double quantile = 0.0;
    double p_value = 1.0;
    bool reject = false;
    double alpha = 0.05;
    std::size_t order = 0;
    Estimator estimator = Estimator::yule_walker;
    AicPenalty penalty = AicPenalty::order;
    AicScaling scaling = AicScaling::whittle;
    bool order_selected = true;
    std::vector<std::optional<double>> aic;
    std::size_t burn_in = 0;
    Eigen::MatrixXd sup_matrix;
    Eigen::MatrixXd innovation_covariance;
    std::vector<double> replicate_stats;
    std::uint64_t seed = 0;
    GridSummary grid;
    Eigen::VectorXd centering_means;
    bool centered = false;
    std::vector<std::string> warnings;
};

/// Drops the last observation of odd-length series; spectral quantities use 2 floor(T/2) points.
[[nodiscard]] inline MultivariateSeries even_length(const MultivariateSeries& series,
                                                    std::vector<std::string>* warnings = nullptr) {
    if (series.length() % 2 == 0) return series;
    if (warnings != nullptr) {
        warnings->push_back("odd series length " + std::to_string(series.length()) +
                            ": the final observation is excluded");
    }
    return series.head(series.effective_length());
}

/// Fits the sieve model used for the bootstrap, with the residual covariance as innovation covariance.
[[nodiscard]] inline OrderSelection fit_sieve_model(const MultivariateSeries& series, const BootstrapConfig& config) {
    OrderSelection sel;
    if (config.order) {
        if (2 * *config.order >= series.length()) throw DomainError("VAR order must be below T/2");
        sel.model = fit_var(series, *config.order, config.estimator);
        sel.order = *config.order;
        sel.p_min = *config.order;
    } else {
        const std::size_t p_max = config.p_max.value_or(default_max_order(series.length()));
        sel = select_order(series, std::min(config.p_min, p_max), p_max, config.estimator, config.penalty,
                           config.scaling);
    }
    sel.model.sigma = residual_covariance(series, sel.model);
    if (!detail::is_positive_definite(sel.model.sigma)) {
        throw DegenerateData("residual covariance of the fitted VAR is not positive definite");
    }
    if (!is_stable(sel.model)) {
        throw UnstableModel("fitted VAR(" + std::to_string(sel.order) + ") is not stable (spectral radius " +
                            std::to_string(companion_spectral_radius(sel.model)) +
                            "); use the Yule-Walker estimator");
    }
    return sel;
}

/**
 * Full bootstrap test: statistic, sieve fit, B replicates, quantile and decision.
 *
 * Deterministic given (series, config); the number of workers does not change the result.
 */
[[nodiscard]] inline TestReport run_test(const MultivariateSeries& input, const BootstrapConfig& config) {
    validate(config);
    TestReport report;
    const auto series = even_length(input, &report.warnings);
    const auto grid = build_grid(series.length());
    const auto observed = deviation_sup(series, grid);

    const auto sel = fit_sieve_model(series, config);

    report.statistic = observed.statistic;
    report.sup_matrix = observed.sup_matrix;
    report.alpha = config.alpha;
    report.order = sel.order;
    report.order_selected = !config.order.has_value();
    report.aic = sel.aic;
    report.estimator = config.estimator;
    report.penalty = config.penalty;
    report.scaling = config.scaling;
    report.burn_in = config.burn_in.value_or(default_burn_in(sel.order));
    report.innovation_covariance = sel.model.sigma;
    report.seed = config.seed;
    report.grid = summarize(grid);
    report.centering_means = input.means();
    report.centered = input.centered();

    report.replicate_stats = bootstrap_replicates(series, sel.model, config, grid);
    report.quantile = bootstrap_quantile(report.replicate_stats, config.alpha);
    report.p_value = bootstrap_p_value(report.replicate_stats, report.statistic);
    report.reject = report.statistic > report.quantile;
    return report;
}

}  // namespace stationarity
