#pragma once

#include "stationarity/errors.hpp"
#include "stationarity/random.hpp"
#include "stationarity/series.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace stationarity {

enum class ModelKind {
    ma1,           // X_t = theta Z_{t-1} + Z_t
    ar1,           // X_t = phi X_{t-1} + Z_t
    vma1,          // X_t = [[theta, c], [c, theta]] Z_{t-1} + Z_t
    var1,          // X_t = [[phi, c], [c, phi]] X_{t-1} + Z_t
    tv_scale,      // X_t = (1 + t/T) Z_t
    tv_ar,         // X_t = -0.9 sqrt(t/T) X_{t-1} + Z_t
    break_ar,      // X_t = +-0.5 X_{t-1} + Z_t, sign flips after T/2
    tv_var,        // X_t = g(t/T) A X_{t-1} + Z_t, g linear (1.4 u) or sin(2 pi u)
    tv_scale_var,  // X_t = A X_{t-1} + 2 sin(2 pi t/T) Z_t
};

enum class TimeProfile { linear, sine };

/// Parameters of one simulation model. Matrices are only used by the vector kinds.
struct ModelSpec {
    std::string name;
    ModelKind kind = ModelKind::ar1;
    std::size_t dim = 1;
    double theta = 0.0;
    double phi = 0.0;
    Eigen::MatrixXd coefficient;  // A, or the lag-one matrix of vma1 / var1
    Eigen::MatrixXd innovation;   // Sigma
    TimeProfile profile = TimeProfile::linear;
};

/// Burn-in discarded by the time-invariant null recursions.
inline constexpr std::size_t kNullBurnIn = 200;

[[nodiscard]] inline Eigen::MatrixXd alternative_coefficient() {
    Eigen::MatrixXd a(2, 2);
    a << 0.6, 0.2, 0.0, 0.3;
    return a;
}

[[nodiscard]] inline Eigen::MatrixXd alternative_innovation() {
    Eigen::MatrixXd s(2, 2);
    s << 1.0, 0.3, 0.3, 1.0;
    return s;
}

[[nodiscard]] inline Eigen::MatrixXd symmetric_null_matrix(double diagonal) {
    Eigen::MatrixXd m(2, 2);
    m << diagonal, 0.2, 0.2, diagonal;
    return m;
}

[[nodiscard]] inline bool is_time_varying(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::ma1:
        case ModelKind::ar1:
        case ModelKind::vma1:
        case ModelKind::var1:
            return false;
        default:
            return true;
    }
}

inline void validate(const ModelSpec& spec) {
    const auto bad = [&](const std::string& why) { throw DomainError("model '" + spec.name + "': " + why); };
    if (spec.dim < 1) bad("dimension must be positive");
    const bool vector_kind = spec.kind == ModelKind::vma1 || spec.kind == ModelKind::var1 ||
                             spec.kind == ModelKind::tv_var || spec.kind == ModelKind::tv_scale_var;
    if (vector_kind) {
        const auto d = static_cast<Eigen::Index>(spec.dim);
        if (spec.coefficient.rows() != d || spec.coefficient.cols() != d) bad("coefficient matrix has the wrong shape");
        if (spec.innovation.rows() != d || spec.innovation.cols() != d) bad("innovation covariance has the wrong shape");
        if ((spec.innovation - spec.innovation.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            bad("innovation covariance must be symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.innovation, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= 0.0) bad("innovation covariance must be positive definite");
        if (spec.kind == ModelKind::var1 || spec.kind == ModelKind::tv_scale_var) {
            Eigen::EigenSolver<Eigen::MatrixXd> ev(spec.coefficient, false);
            if (ev.eigenvalues().cwiseAbs().maxCoeff() >= 1.0) bad("coefficient matrix must have spectral radius < 1");
        }
    } else if (spec.dim != 1) {
        bad("univariate model with dim != 1");
    }
    if (spec.kind == ModelKind::ar1 && !(std::abs(spec.phi) < 1.0)) bad("|phi| must be < 1");
    if (spec.kind == ModelKind::ma1 && !(std::abs(spec.theta) <= 1.0)) bad("|theta| must be <= 1");
}

/// Preset names: white, ma1, ar1, vma1, var1, tv-scale, tv-ar, break-ar, tv-var, tv-var-sin, tv-scale-var.
/// `param` overrides theta (ma1, vma1) or phi (ar1, var1).
[[nodiscard]] inline ModelSpec model_preset(const std::string& name, std::optional<double> param = std::nullopt) {
    ModelSpec spec;
    spec.name = name;
    if (name == "white") {
        spec.kind = ModelKind::ma1;
        spec.theta = 0.0;
    } else if (name == "ma1") {
        spec.kind = ModelKind::ma1;
        spec.theta = param.value_or(0.5);
    } else if (name == "ar1") {
        spec.kind = ModelKind::ar1;
        spec.phi = param.value_or(0.5);
    } else if (name == "vma1") {
        spec.kind = ModelKind::vma1;
        spec.dim = 2;
        spec.theta = param.value_or(0.5);
        spec.coefficient = symmetric_null_matrix(spec.theta);
        spec.innovation = Eigen::MatrixXd::Identity(2, 2);
    } else if (name == "var1") {
        spec.kind = ModelKind::var1;
        spec.dim = 2;
        spec.phi = param.value_or(0.5);
        spec.coefficient = symmetric_null_matrix(spec.phi);
        spec.innovation = Eigen::MatrixXd::Identity(2, 2);
    } else if (name == "tv-scale") {
        spec.kind = ModelKind::tv_scale;
    } else if (name == "tv-ar") {
        spec.kind = ModelKind::tv_ar;
    } else if (name == "break-ar") {
        spec.kind = ModelKind::break_ar;
    } else if (name == "tv-var" || name == "tv-var-sin") {
        spec.kind = ModelKind::tv_var;
        spec.dim = 2;
        spec.profile = name == "tv-var" ? TimeProfile::linear : TimeProfile::sine;
        spec.coefficient = alternative_coefficient();
        spec.innovation = alternative_innovation();
    } else if (name == "tv-scale-var") {
        spec.kind = ModelKind::tv_scale_var;
        spec.dim = 2;
        spec.coefficient = alternative_coefficient();
        spec.innovation = alternative_innovation();
    } else {
        throw DomainError("unknown model '" + name + "'");
    }
    validate(spec);
    return spec;
}

[[nodiscard]] inline std::vector<std::string> model_names() {
    return {"white", "ma1", "ar1", "vma1", "var1", "tv-scale", "tv-ar", "break-ar", "tv-var", "tv-var-sin",
            "tv-scale-var"};
}

/**
 * Draws T observations of the model with Gaussian innovations.
 *
 * Time-invariant nulls run kNullBurnIn steps from a zero state first; time-varying
 * models start at t = 1 from a zero state.
 */
[[nodiscard]] inline MultivariateSeries generate(const ModelSpec& spec, std::size_t t, Rng& rng) {
    validate(spec);
    if (t < kMinSeriesLength) throw DomainError("series length must be at least 8");
    const auto d = static_cast<Eigen::Index>(spec.dim);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd chol = Eigen::MatrixXd::Identity(d, d);
    if (spec.innovation.size() != 0) chol = spec.innovation.llt().matrixL();
    auto innovation = [&] {
        Eigen::VectorXd z(d);
        for (Eigen::Index a = 0; a < d; ++a) z(a) = normal(rng);
        return Eigen::VectorXd(chol * z);
    };

    const std::size_t burn = is_time_varying(spec.kind) ? 0 : kNullBurnIn;
    const double tt = static_cast<double>(t);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(t), d);
    Eigen::VectorXd prev_x = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd prev_z = Eigen::VectorXd::Zero(d);
    for (std::size_t step = 0; step < burn + t; ++step) {
        const Eigen::VectorXd z = innovation();
        const bool recording = step >= burn;
        // Rescaled time t/T with t = 1..T on the recorded stretch.
        const double u = recording ? static_cast<double>(step - burn + 1) / tt : 0.0;
        Eigen::VectorXd x(d);
        switch (spec.kind) {
            case ModelKind::ma1:
                x = spec.theta * prev_z + z;
                break;
            case ModelKind::ar1:
                x = spec.phi * prev_x + z;
                break;
            case ModelKind::vma1:
                x = spec.coefficient * prev_z + z;
                break;
            case ModelKind::var1:
                x = spec.coefficient * prev_x + z;
                break;
            case ModelKind::tv_scale:
                x = (1.0 + u) * z;
                break;
            case ModelKind::tv_ar:
                x = -0.9 * std::sqrt(u) * prev_x + z;
                break;
            case ModelKind::break_ar: {
                const std::size_t time = step + 1;
                x = (2 * time <= t ? 0.5 : -0.5) * prev_x + z;
                break;
            }
            case ModelKind::tv_var: {
                const double g = spec.profile == TimeProfile::linear ? 1.4 * u : std::sin(2.0 * std::numbers::pi * u);
                x = g * (spec.coefficient * prev_x) + z;
                break;
            }
            case ModelKind::tv_scale_var:
                x = spec.coefficient * prev_x + 2.0 * std::sin(2.0 * std::numbers::pi * u) * z;
                break;
        }
        if (recording) out.row(static_cast<Eigen::Index>(step - burn)) = x.transpose();
        prev_x = x;
        prev_z = z;
    }
    return MultivariateSeries(std::move(out));
}

}  // namespace stationarity
