#pragma once

#include "stationarity/errors.hpp"
#include "stationarity/series.hpp"
#include "stationarity/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace stationarity {

/// Gamma(h) = (1/T) sum_{t=1}^{T-h} X_{t+h} X_t^T for h = 0..h_max.
struct AutocovarianceSequence {
    std::size_t t_len = 0;
    std::vector<Eigen::MatrixXd> lags;

    [[nodiscard]] std::size_t max_lag() const noexcept { return lags.empty() ? 0 : lags.size() - 1; }
    [[nodiscard]] std::size_t dim() const noexcept { return lags.empty() ? 0 : static_cast<std::size_t>(lags[0].rows()); }
};

enum class Estimator { yule_walker, least_squares };

[[nodiscard]] inline const char* to_string(Estimator e) noexcept {
    return e == Estimator::yule_walker ? "yule-walker" : "least-squares";
}

/// AIC penalty: p/T as printed, or the parameter count p d^2 / T.
enum class AicPenalty { order, parameters };

[[nodiscard]] inline const char* to_string(AicPenalty p) noexcept {
    return p == AicPenalty::order ? "order" : "parameters";
}

/**
 * Scale of the likelihood term. `whittle` is (1/T) sum_{k=1}^{T/2}, the Whittle
 * approximation of -log L / T that the p/T penalty is calibrated against;
 * `display` multiplies it by 2 pi, which drives the criterion to the largest order.
 */
enum class AicScaling { whittle, display };

[[nodiscard]] inline const char* to_string(AicScaling s) noexcept {
    return s == AicScaling::whittle ? "whittle" : "display";
}

[[nodiscard]] inline double likelihood_scale(AicScaling s) noexcept {
    return s == AicScaling::whittle ? 1.0 : 2.0 * std::numbers::pi;
}

/// X_t = sum_j coeffs[j-1] X_{t-j} + e_t with Cov(e_t) = sigma.
struct VarModel {
    std::size_t order = 0;
    std::vector<Eigen::MatrixXd> coeffs;
    Eigen::MatrixXd sigma;
    Estimator method = Estimator::yule_walker;

    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(sigma.rows()); }
};

[[nodiscard]] inline AutocovarianceSequence sample_autocov(const MultivariateSeries& series, std::size_t h_max) {
    const std::size_t t = series.length();
    if (h_max >= t) throw DomainError("maximum lag must be smaller than the series length");
    const auto& x = series.values();
    AutocovarianceSequence out;
    out.t_len = t;
    out.lags.reserve(h_max + 1);
    for (std::size_t h = 0; h <= h_max; ++h) {
        const auto n = static_cast<Eigen::Index>(t - h);
        out.lags.emplace_back(x.bottomRows(n).transpose() * x.topRows(n) / static_cast<double>(t));
    }
    return out;
}

namespace detail {

/// Smallest eigenvalue of a symmetric matrix relative to its average diagonal.
inline bool is_positive_definite(const Eigen::MatrixXd& m, double rel_tol = 1e-12) {
    if (m.size() == 0 || !m.allFinite()) return false;
    const double scale = m.trace() / static_cast<double>(m.rows());
    if (!(scale > 0.0)) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > rel_tol * scale;
}

}  // namespace detail

/// Spectral radius of the VAR companion matrix (0 for p = 0).
[[nodiscard]] inline double companion_spectral_radius(const VarModel& model) {
    if (model.order == 0) return 0.0;
    const auto d = static_cast<Eigen::Index>(model.dim());
    const auto p = static_cast<Eigen::Index>(model.order);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d * p, d * p);
    for (Eigen::Index j = 0; j < p; ++j) companion.block(0, j * d, d, d) = model.coeffs[static_cast<std::size_t>(j)];
    if (p > 1) companion.block(d, 0, d * (p - 1), d * (p - 1)).setIdentity();
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

[[nodiscard]] inline bool is_stable(const VarModel& model, double margin = 1e-8) {
    return companion_spectral_radius(model) < 1.0 - margin;
}

/**
 * Multivariate Yule-Walker fit through the block Levinson-Whittle recursion.
 *
 * Forward and backward prediction filters are updated together; sigma is the
 * forward prediction-error covariance after p steps.
 */
[[nodiscard]] inline VarModel yule_walker_fit(const AutocovarianceSequence& acov, std::size_t p) {
    if (acov.lags.empty() || acov.max_lag() < p) throw DomainError("autocovariances do not reach the requested order");
    const auto& g = acov.lags;
    const Eigen::Index d = g[0].rows();
    const double scale = g[0].trace() / static_cast<double>(d);
    if (!detail::is_positive_definite(g[0])) throw DegenerateData("lag-0 autocovariance is not positive definite");

    std::vector<Eigen::MatrixXd> fwd;  // A_{j,m}
    std::vector<Eigen::MatrixXd> bwd;  // B_{j,m}
    Eigen::MatrixXd v = g[0];          // forward error covariance
    Eigen::MatrixXd u = g[0];          // backward error covariance
    for (std::size_t m = 0; m < p; ++m) {
        Eigen::MatrixXd delta = g[m + 1];
        for (std::size_t j = 1; j <= m; ++j) delta -= fwd[j - 1] * g[m + 1 - j];
        const Eigen::MatrixXd k_fwd = u.transpose().ldlt().solve(delta.transpose()).transpose();  // delta u^{-1}
        const Eigen::MatrixXd k_bwd = v.transpose().ldlt().solve(delta).transpose();              // delta^T v^{-1}
        std::vector<Eigen::MatrixXd> nf(m + 1), nb(m + 1);
        for (std::size_t j = 1; j <= m; ++j) {
            nf[j - 1] = fwd[j - 1] - k_fwd * bwd[m - j];
            nb[j - 1] = bwd[j - 1] - k_bwd * fwd[m - j];
        }
        nf[m] = k_fwd;
        nb[m] = k_bwd;
        v = v - k_fwd * delta.transpose();
        u = u - k_bwd * delta;
        v = 0.5 * (v + v.transpose());
        u = 0.5 * (u + u.transpose());
        fwd = std::move(nf);
        bwd = std::move(nb);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v, Eigen::EigenvaluesOnly);
        if (!v.allFinite() || es.eigenvalues().minCoeff() < 1e-12 * scale) {
            throw DegenerateData("block-Toeplitz system is singular at order " + std::to_string(m + 1));
        }
    }
    VarModel model;
    model.order = p;
    model.coeffs = std::move(fwd);
    model.sigma = v;
    model.method = Estimator::yule_walker;
    return model;
}

/// Residuals X_j - sum_i a_i X_{j-i} for j = p+1..T, one row per time point.
[[nodiscard]] inline Eigen::MatrixXd var_residuals(const MultivariateSeries& series, const VarModel& model) {
    const std::size_t t = series.length();
    const std::size_t p = model.order;
    if (t <= p) throw DomainError("series is not longer than the model order");
    const auto& x = series.values();
    const auto n = static_cast<Eigen::Index>(t - p);
    Eigen::MatrixXd z = x.bottomRows(n);
    for (std::size_t i = 1; i <= p; ++i) {
        z -= x.middleRows(static_cast<Eigen::Index>(p - i), n) * model.coeffs[i - 1].transpose();
    }
    return z;
}

/// (1/(T-p)) sum (z_j - zbar)(z_j - zbar)^T over the fitted residuals.
[[nodiscard]] inline Eigen::MatrixXd residual_covariance(const MultivariateSeries& series, const VarModel& model) {
    const Eigen::MatrixXd z = var_residuals(series, model);
    const Eigen::MatrixXd zc = z.rowwise() - z.colwise().mean();
    Eigen::MatrixXd cov = zc.transpose() * zc / static_cast<double>(z.rows());
    return 0.5 * (cov + cov.transpose());
}

/// OLS coefficients of X_t on (X_{t-1}, ..., X_{t-p}) without intercept.
[[nodiscard]] inline std::vector<Eigen::MatrixXd> least_squares_coefficients(const MultivariateSeries& series,
                                                                             std::size_t p) {
    const std::size_t t = series.length();
    const std::size_t d = series.dim();
    if (p < 1) throw DomainError("least squares needs p >= 1");
    if (t <= p || t - p <= d * p) throw DomainError("too few observations for a VAR of this order");
    const auto& x = series.values();
    const auto n = static_cast<Eigen::Index>(t - p);
    const auto dd = static_cast<Eigen::Index>(d);
    Eigen::MatrixXd reg(n, dd * static_cast<Eigen::Index>(p));
    for (std::size_t i = 1; i <= p; ++i) {
        reg.middleCols(static_cast<Eigen::Index>(i - 1) * dd, dd) = x.middleRows(static_cast<Eigen::Index>(p - i), n);
    }
    const Eigen::MatrixXd y = x.bottomRows(n);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(reg);
    qr.setThreshold(1e-12);
    if (qr.rank() < reg.cols()) throw DegenerateData("regressor Gram matrix is rank deficient");
    const Eigen::MatrixXd beta = qr.solve(y);  // (dp) x d, rows grouped by lag
    std::vector<Eigen::MatrixXd> coeffs;
    coeffs.reserve(p);
    for (std::size_t i = 0; i < p; ++i) {
        coeffs.emplace_back(beta.middleRows(static_cast<Eigen::Index>(i) * dd, dd).transpose());
    }
    return coeffs;
}

[[nodiscard]] inline VarModel least_squares_fit(const MultivariateSeries& series, std::size_t p) {
    VarModel model;
    model.order = p;
    model.coeffs = least_squares_coefficients(series, p);
    model.method = Estimator::least_squares;
    model.sigma = residual_covariance(series, model);
    const Eigen::MatrixXd g0 = series.values().transpose() * series.values() / static_cast<double>(series.length());
    const double data_scale = g0.trace() / static_cast<double>(g0.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.sigma, Eigen::EigenvaluesOnly);
    if (!(data_scale > 0.0) || es.eigenvalues().minCoeff() <= 1e-12 * data_scale) {
        throw DegenerateData("residual covariance is not positive definite (exact linear fit?)");
    }
    return model;
}

/// Phi(e^{-i lambda}) = I - sum_j a_j e^{-i lambda j}.
[[nodiscard]] inline Eigen::MatrixXcd transfer_matrix(const VarModel& model, double lambda) {
    const auto d = static_cast<Eigen::Index>(model.dim());
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Identity(d, d);
    for (std::size_t j = 1; j <= model.order; ++j) {
        phi -= std::polar(1.0, -lambda * static_cast<double>(j)) * model.coeffs[j - 1].cast<cdouble>();
    }
    return phi;
}

/// f(lambda) = (1/2pi) Phi^{-1} Sigma Phi^{-H}.
[[nodiscard]] inline SpectralMatrix var_spectral_density(const VarModel& model, double lambda) {
    const Eigen::MatrixXcd phi = transfer_matrix(model, lambda);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(phi);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > 1e12) {
        throw NumericalError("VAR transfer matrix is numerically singular at frequency " + std::to_string(lambda));
    }
    const Eigen::MatrixXcd inv = phi.inverse();
    SpectralMatrix out;
    out.entries = inv * model.sigma.cast<cdouble>() * inv.adjoint() / (2.0 * std::numbers::pi);
    out.entries = 0.5 * (out.entries + out.entries.adjoint()).eval();
    out.frequency = lambda;
    return out;
}

/// Whittle likelihood (1/T) sum_{k=1}^{T/2} [log det f + tr(f^{-1} I_T)] at the Fourier frequencies of base T.
[[nodiscard]] inline double whittle_likelihood(const CumulativePeriodogram& full, const VarModel& model) {
    const std::size_t t = full.base();
    const auto d = static_cast<Eigen::Index>(model.dim());
    double total = 0.0;
    for (std::size_t k = 1; k <= full.half(); ++k) {
        const double lambda = fourier_frequency(k, t);
        const auto f = var_spectral_density(model, lambda).entries;
        Eigen::LLT<Eigen::MatrixXcd> llt(f);
        if (llt.info() != Eigen::Success) {
            throw NumericalError("fitted spectral density is not positive definite");
        }
        const Eigen::MatrixXcd periodogram = full.partial_sum(k) - full.partial_sum(k - 1);
        double log_det = 0.0;
        for (Eigen::Index a = 0; a < d; ++a) log_det += 2.0 * std::log(llt.matrixL()(a, a).real());
        total += log_det + llt.solve(periodogram).trace().real();
    }
    return total / static_cast<double>(t);
}

[[nodiscard]] inline double aic_penalty(std::size_t order, std::size_t dim, std::size_t t, AicPenalty kind) {
    const double count = kind == AicPenalty::order ? static_cast<double>(order)
                                                   : static_cast<double>(order * dim * dim);
    return count / static_cast<double>(t);
}

/// Whittle AIC of a fitted model on the series' full-sample periodogram.
[[nodiscard]] inline double whittle_aic(const MultivariateSeries& series, const VarModel& model,
                                        AicPenalty penalty = AicPenalty::order,
                                        AicScaling scaling = AicScaling::whittle) {
    const std::size_t t = series.effective_length();
    const auto full = cumulative_periodogram(series, t);
    return likelihood_scale(scaling) * whittle_likelihood(full, model) +
           aic_penalty(model.order, model.dim(), t, penalty);
}

struct OrderSelection {
    VarModel model;
    std::size_t order = 0;
    std::vector<std::optional<double>> aic;  // indexed by p - p_min; empty when the fit failed
    std::size_t p_min = 0;
};

/// Default upper order: min(floor(T/10), 15).
[[nodiscard]] inline std::size_t default_max_order(std::size_t t) { return std::min<std::size_t>(t / 10, 15); }

[[nodiscard]] inline VarModel fit_var(const MultivariateSeries& series, std::size_t p, Estimator method,
                                      const AutocovarianceSequence* acov = nullptr) {
    if (method == Estimator::least_squares && p > 0) return least_squares_fit(series, p);
    if (acov != nullptr && acov->max_lag() >= p) return yule_walker_fit(*acov, p);
    return yule_walker_fit(sample_autocov(series, p), p);
}

/// AIC-minimising order in [p_min, p_max]; ties go to the smaller order.
[[nodiscard]] inline OrderSelection select_order(const MultivariateSeries& series, std::size_t p_min,
                                                 std::size_t p_max, Estimator method = Estimator::yule_walker,
                                                 AicPenalty penalty = AicPenalty::order,
                                                 AicScaling scaling = AicScaling::whittle) {
    const std::size_t t = series.effective_length();
    if (p_min > p_max || 2 * p_max >= series.length()) {
        throw DomainError("order range must satisfy p_min <= p_max < T/2");
    }
    const auto acov = sample_autocov(series, p_max);
    const auto full = cumulative_periodogram(series, t);
    OrderSelection out;
    out.p_min = p_min;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t p = p_min; p <= p_max; ++p) {
        try {
            auto model = fit_var(series, p, method, &acov);
            const double aic = likelihood_scale(scaling) * whittle_likelihood(full, model) +
                               aic_penalty(p, model.dim(), t, penalty);
            out.aic.emplace_back(aic);
            if (aic < best) {
                best = aic;
                out.model = std::move(model);
                out.order = p;
                found = true;
            }
        } catch (const DegenerateData&) {
            out.aic.emplace_back(std::nullopt);
        } catch (const NumericalError&) {
            out.aic.emplace_back(std::nullopt);
        } catch (const DomainError&) {
            out.aic.emplace_back(std::nullopt);
        }
    }
    if (!found) throw DegenerateData("no candidate order produced a valid VAR fit");
    return out;
}

}  // namespace stationarity
