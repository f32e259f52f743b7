#pragma once

#include "stationarity/bootstrap.hpp"
#include "stationarity/deviation.hpp"
#include "stationarity/identification.hpp"
#include "stationarity/montecarlo.hpp"
#include "stationarity/var.hpp"
#include "stationarity/version.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace stationarity {

/// Bumped whenever a field is renamed or removed.
inline constexpr int kReportSchemaVersion = 1;

namespace json_detail {

using nlohmann::json;

template <typename Derived>
json matrix(const Eigen::MatrixBase<Derived>& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json vector(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline json header(const std::string& command) {
    return json{{"schema_version", kReportSchemaVersion}, {"software", kSoftwareName},
                {"software_version", kSoftwareVersion}, {"command", command}};
}

inline json grid(const GridSummary& g) {
    return json{{"T", g.t_len}, {"T_eff", g.t_eff}, {"dyadic", g.dyadic}, {"v_values", g.v_values}};
}

}  // namespace json_detail

[[nodiscard]] inline nlohmann::json to_json(const TestReport& r) {
    using nlohmann::json;
    json aic = json::array();
    for (const auto& a : r.aic) aic.push_back(a ? json(*a) : json(nullptr));
    json out = json_detail::header("test");
    out["statistic"] = r.statistic;
    out["quantile"] = r.quantile;
    out["p_value"] = r.p_value;
    out["reject"] = r.reject;
    out["alpha"] = r.alpha;
    out["bootstrap"] = json{{"replicates", r.replicate_stats.size()},
                            {"seed", r.seed},
                            {"burn_in", r.burn_in},
                            {"replicate_stats", r.replicate_stats}};
    out["model"] = json{{"order", r.order},
                        {"order_selected", r.order_selected},
                        {"estimator", to_string(r.estimator)},
                        {"aic_penalty", to_string(r.penalty)},
                        {"aic_scale", to_string(r.scaling)},
                        {"aic", aic},
                        {"innovation_covariance", json_detail::matrix(r.innovation_covariance)}};
    out["sup_matrix"] = json_detail::matrix(r.sup_matrix);
    out["grid"] = json_detail::grid(r.grid);
    out["centering"] = json{{"centered", r.centered}, {"means", json_detail::vector(r.centering_means)}};
    out["warnings"] = r.warnings;
    return out;
}

[[nodiscard]] inline nlohmann::json to_json(const IdentificationResult& r, const SupSummary& summary,
                                            const GridSummary& grid) {
    using nlohmann::json;
    json out = json_detail::header("identify");
    out["statistic"] = summary.statistic;
    out["sup_matrix"] = json_detail::matrix(summary.sup_matrix);
    out["gamma"] = r.gamma;
    out["pair_stats"] = json_detail::matrix(r.pair_stats);
    out["thresholds"] = json_detail::matrix(r.thresholds);
    out["indicator"] = json_detail::matrix(r.indicator);
    out["d_prime"] = r.d_prime;
    out["subsets"] = r.subsets;
    out["component_indexing"] = "0-based";
    out["grid"] = json_detail::grid(grid);
    return out;
}

[[nodiscard]] inline nlohmann::json to_json(const OrderSelection& sel, std::size_t t, Estimator estimator,
                                            AicPenalty penalty, AicScaling scaling = AicScaling::whittle) {
    using nlohmann::json;
    json aic = json::array();
    for (std::size_t i = 0; i < sel.aic.size(); ++i) {
        aic.push_back(json{{"order", sel.p_min + i}, {"aic", sel.aic[i] ? json(*sel.aic[i]) : json(nullptr)}});
    }
    json coeffs = json::array();
    for (const auto& a : sel.model.coeffs) coeffs.push_back(json_detail::matrix(a));
    json out = json_detail::header("order");
    out["T"] = t;
    out["order"] = sel.order;
    out["estimator"] = to_string(estimator);
    out["aic_penalty"] = to_string(penalty);
    out["aic_scale"] = to_string(scaling);
    out["aic"] = aic;
    out["coefficients"] = coeffs;
    out["sigma"] = json_detail::matrix(sel.model.sigma);
    return out;
}

[[nodiscard]] inline nlohmann::json to_json(const McTable& table, const McExperiment& exp) {
    using nlohmann::json;
    json rows = json::array();
    for (const auto& r : table.rows) {
        rows.push_back(json{{"model", r.model},
                            {"T", r.t_len},
                            {"alpha", r.alpha},
                            {"runs", r.runs},
                            {"completed", r.completed},
                            {"rejections", r.rejections},
                            {"frequency", r.frequency},
                            {"std_error", r.std_error}});
    }
    json out = json_detail::header("mc");
    out["seed"] = table.seed;
    out["replicates"] = table.replicates;
    out["estimator"] = to_string(exp.bootstrap.estimator);
    out["aic_penalty"] = to_string(exp.bootstrap.penalty);
    out["aic_scale"] = to_string(exp.bootstrap.scaling);
    out["centered"] = exp.center;
    out["rows"] = rows;
    out["failures"] = table.failures;
    return out;
}

/// Canonical text form: two-space indentation, trailing newline.
[[nodiscard]] inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Long-format (v, omega, a, b, modulus) rows of a deviation field, 0-based components.
inline void write_field_csv(std::ostream& out, const DeviationField& field) {
    out << "v,omega,a,b,modulus\n";
    for (const auto& slice : field.slices) {
        for (std::size_t k = 0; k < slice.omegas.size(); ++k) {
            const auto& m = slice.values[k];
            for (Eigen::Index a = 0; a < m.rows(); ++a) {
                for (Eigen::Index b = 0; b < m.cols(); ++b) {
                    out << format_double(slice.v) << ',' << format_double(slice.omegas[k]) << ',' << a << ',' << b
                        << ',' << format_double(std::abs(m(a, b))) << '\n';
                }
            }
        }
    }
}

}  // namespace stationarity
