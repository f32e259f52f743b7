#pragma once

#include "stationarity/deviation.hpp"
#include "stationarity/errors.hpp"
#include "stationarity/series.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace stationarity {

inline constexpr std::size_t kMaxCliqueDimension = 30;
inline constexpr double kDefaultGamma = 0.25;

using ComponentSet = std::vector<std::size_t>;

struct IdentificationResult {
    Eigen::MatrixXi indicator;
    Eigen::MatrixXd thresholds;
    Eigen::MatrixXd pair_stats;
    std::size_t d_prime = 0;
    std::vector<ComponentSet> subsets;
    double gamma = kDefaultGamma;
};

/// V_{T,a,b} = 0.0125 pi^{-2} T^{-2} sum_t X_{t,a}^2 sum_t X_{t,b}^2.
[[nodiscard]] inline double variation_proxy(const MultivariateSeries& series, std::size_t a, std::size_t b) {
    if (a >= series.dim() || b >= series.dim()) throw DomainError("component index out of range");
    const auto& x = series.values();
    const double t = static_cast<double>(series.length());
    const double sa = x.col(static_cast<Eigen::Index>(a)).squaredNorm();
    const double sb = x.col(static_cast<Eigen::Index>(b)).squaredNorm();
    return 0.0125 / (std::numbers::pi * std::numbers::pi) / (t * t) * sa * sb;
}

/// Hard threshold T^gamma sqrt(2 V log(d(d+1)/2)).
[[nodiscard]] inline double threshold_from_proxy(double proxy, std::size_t t, std::size_t d, double gamma) {
    if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("gamma must lie in (0, 1/2)");
    if (d < 2) throw DomainError("component identification needs at least two components");
    const double log_pairs = std::log(static_cast<double>(d * (d + 1)) / 2.0);
    return std::pow(static_cast<double>(t), gamma) * std::sqrt(2.0 * proxy * log_pairs);
}

[[nodiscard]] inline double threshold(const MultivariateSeries& series, std::size_t a, std::size_t b, double gamma) {
    return threshold_from_proxy(variation_proxy(series, a, b), series.length(), series.dim(), gamma);
}

/**
 * All maximum cliques of an undirected graph on <= 30 vertices given as adjacency bitmasks.
 *
 * Branch and bound over candidates ordered by decreasing degree; a branch is cut
 * only when it cannot reach the current best size, so every maximum clique is kept.
 * Cliques are returned as sorted vertex lists in lexicographic order.
 */
[[nodiscard]] inline std::vector<ComponentSet> maximum_cliques(const std::vector<std::uint32_t>& adjacency,
                                                               std::uint32_t vertices) {
    const std::size_t n = adjacency.size();
    if (n > kMaxCliqueDimension) throw DomainError("clique search supports at most 30 components");
    std::vector<std::size_t> order;
    for (std::size_t v = 0; v < n; ++v)
        if (vertices & (1u << v)) order.push_back(v);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::popcount(adjacency[a] & vertices) > std::popcount(adjacency[b] & vertices);
    });
    std::size_t best = 0;
    std::vector<std::uint32_t> found;
    // A vertex leaves the candidate set once its branch is explored, so each clique is built once.
    auto expand = [&](auto&& self, std::uint32_t clique, std::size_t size, std::uint32_t candidates) -> void {
        if (candidates == 0) {
            if (size > best) {
                best = size;
                found.clear();
            }
            if (size == best && size > 0) found.push_back(clique);
            return;
        }
        for (const std::size_t v : order) {
            if (!(candidates & (1u << v))) continue;
            if (size + static_cast<std::size_t>(std::popcount(candidates)) < best) return;
            candidates &= ~(1u << v);
            self(self, clique | (1u << v), size + 1, candidates & adjacency[v]);
        }
    };
    expand(expand, 0u, 0, vertices);

    std::vector<ComponentSet> out;
    for (const auto mask : found) {
        ComponentSet s;
        for (std::size_t v = 0; v < n; ++v)
            if (mask & (1u << v)) s.push_back(v);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Largest index sets on which a symmetric 0/1 indicator vanishes, diagonal included.
[[nodiscard]] inline std::vector<ComponentSet> maximum_stationary_subsets(const Eigen::MatrixXi& indicator) {
    const auto dd = indicator.rows();
    if (indicator.cols() != dd) throw DomainError("indicator must be square");
    if (static_cast<std::size_t>(dd) > kMaxCliqueDimension) throw DomainError("clique search supports at most 30 components");
    std::vector<std::uint32_t> adjacency(static_cast<std::size_t>(dd), 0);
    std::uint32_t vertices = 0;
    for (Eigen::Index a = 0; a < dd; ++a) {
        if (indicator(a, a) == 0) vertices |= 1u << a;
        for (Eigen::Index b = 0; b < dd; ++b) {
            if (a != b && indicator(a, b) == 0 && indicator(b, a) == 0) adjacency[static_cast<std::size_t>(a)] |= 1u << b;
        }
    }
    return maximum_cliques(adjacency, vertices);
}

/**
 * Pairwise hard-threshold indicators and the maximum stationary subsets.
 *
 * c(a,b) = 1 when sqrt(T) sup|D_ab| exceeds the threshold. A subset qualifies when
 * c vanishes on all its ordered pairs, diagonal included, i.e. it is a clique of the
 * graph with vertices {i : c(i,i) = 0} and edges {c(i,j) = 0}.
 */
[[nodiscard]] inline IdentificationResult identify(const MultivariateSeries& series, const Eigen::MatrixXd& sup_matrix,
                                                   double gamma = kDefaultGamma) {
    const std::size_t d = series.dim();
    if (d < 2) throw DomainError("component identification needs at least two components (d = 1 has no threshold)");
    if (d > kMaxCliqueDimension) throw DomainError("component identification supports at most 30 components");
    if (static_cast<std::size_t>(sup_matrix.rows()) != d || static_cast<std::size_t>(sup_matrix.cols()) != d) {
        throw DomainError("sup matrix does not match the series dimension");
    }
    if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("gamma must lie in (0, 1/2)");
    const auto dd = static_cast<Eigen::Index>(d);
    const std::size_t t = series.length();
    IdentificationResult out;
    out.gamma = gamma;
    out.indicator = Eigen::MatrixXi::Zero(dd, dd);
    out.thresholds = Eigen::MatrixXd::Zero(dd, dd);
    out.pair_stats = std::sqrt(static_cast<double>(t)) * sup_matrix;
    for (Eigen::Index a = 0; a < dd; ++a) {
        for (Eigen::Index b = a; b < dd; ++b) {
            const double eps = threshold(series, static_cast<std::size_t>(a), static_cast<std::size_t>(b), gamma);
            const double stat = std::max(out.pair_stats(a, b), out.pair_stats(b, a));
            const int c = stat > eps ? 1 : 0;
            out.thresholds(a, b) = out.thresholds(b, a) = eps;
            out.indicator(a, b) = out.indicator(b, a) = c;
        }
    }
    out.subsets = maximum_stationary_subsets(out.indicator);
    out.d_prime = out.subsets.empty() ? 0 : out.subsets.front().size();
    return out;
}

/// Computes the deviation sup on the even-length series and identifies stationary subsets.
[[nodiscard]] inline IdentificationResult identify(const MultivariateSeries& series, const DeviationField& field,
                                                   double gamma = kDefaultGamma) {
    if (field.grid.t_eff != series.effective_length()) throw DomainError("field was computed for a different series");
    return identify(series.head(series.effective_length()), field.sup_matrix, gamma);
}

}  // namespace stationarity
