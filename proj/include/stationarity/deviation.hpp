#pragma once

#include "stationarity/errors.hpp"
#include "stationarity/series.hpp"
#include "stationarity/spectral.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace stationarity {

/// One evaluation point of D(v, .): omega and the two summation limits it induces.
struct Breakpoint {
    double omega = 0.0;
    std::size_t prefix_index = 0;  // floor(omega * n_v)
    std::size_t full_index = 0;    // floor(omega * T_eff / 2)
};

/**
 * The (v, omega) evaluation grid.
 *
 * v takes the values 2 n_v / T_eff for the stored half lengths n_v. For each v the
 * omega set is the union of {k / n_v} and {k / (T_eff/2)}: D(v, .) is a
 * right-continuous step function that only jumps there, so the sup over omega in
 * [0,1] is attained on this set.
 */
struct EvaluationGrid {
    std::size_t t_len = 0;
    std::size_t t_eff = 0;
    bool dyadic = false;
    std::vector<std::size_t> half_lengths;

    [[nodiscard]] std::size_t size() const noexcept { return half_lengths.size(); }
    [[nodiscard]] std::size_t full_half() const noexcept { return t_eff / 2; }
    [[nodiscard]] double v(std::size_t i) const {
        return 2.0 * static_cast<double>(half_lengths.at(i)) / static_cast<double>(t_eff);
    }
    [[nodiscard]] std::vector<double> v_values() const {
        std::vector<double> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) out.push_back(v(i));
        return out;
    }

    /// Calls fn(Breakpoint) for every omega breakpoint of slice i in ascending order.
    template <typename Fn>
    void for_each_breakpoint(std::size_t i, Fn&& fn) const {
        const std::size_t nv = half_lengths.at(i);
        const std::size_t n1 = full_half();
        std::size_t k1 = 0;  // next k/nv
        std::size_t k2 = 0;  // next k/n1
        while (k1 <= nv || k2 <= n1) {
            // Compare k1/nv with k2/n1 exactly.
            const bool take1 = k2 > n1 || (k1 <= nv && k1 * n1 <= k2 * nv);
            const bool take2 = k1 > nv || (k2 <= n1 && k2 * nv <= k1 * n1);
            Breakpoint bp;
            if (take1) {
                bp.omega = static_cast<double>(k1) / static_cast<double>(nv);
                bp.prefix_index = k1;
                bp.full_index = k1 * n1 / nv;
            } else {
                bp.omega = static_cast<double>(k2) / static_cast<double>(n1);
                bp.prefix_index = k2 * nv / n1;
                bp.full_index = k2;
            }
            fn(bp);
            if (take1) ++k1;
            if (take2) ++k2;
        }
    }

    [[nodiscard]] std::vector<Breakpoint> breakpoints(std::size_t i) const {
        std::vector<Breakpoint> out;
        for_each_breakpoint(i, [&](const Breakpoint& bp) { out.push_back(bp); });
        return out;
    }
};

/// Dyadic v-grid {2^i / T_eff} when T_eff is a power of two, otherwise {2j / T_eff}.
[[nodiscard]] inline EvaluationGrid build_grid(std::size_t t) {
    if (t < kMinSeriesLength) {
        throw TooShort("series length " + std::to_string(t) + " is below the minimum of " +
                       std::to_string(kMinSeriesLength));
    }
    EvaluationGrid grid;
    grid.t_len = t;
    grid.t_eff = 2 * (t / 2);
    grid.dyadic = is_power_of_two(grid.t_eff);
    if (grid.dyadic) {
        for (std::size_t n = 1; n <= grid.full_half(); n *= 2) grid.half_lengths.push_back(n);
    } else {
        for (std::size_t n = 1; n <= grid.full_half(); ++n) grid.half_lengths.push_back(n);
    }
    return grid;
}

/// Every admissible v = 2j / T_eff regardless of T.
[[nodiscard]] inline EvaluationGrid build_full_grid(std::size_t t) {
    auto grid = build_grid(t);
    grid.dyadic = false;
    grid.half_lengths.clear();
    for (std::size_t n = 1; n <= grid.full_half(); ++n) grid.half_lengths.push_back(n);
    return grid;
}

/// Entrywise sup matrix and its Frobenius norm.
struct SupSummary {
    Eigen::MatrixXd sup_matrix;
    double statistic = 0.0;
};

struct FieldSlice {
    double v = 0.0;
    std::vector<double> omegas;
    std::vector<Eigen::MatrixXcd> values;
};

/// D(v, omega) on every grid point, with the resulting sup matrix and statistic.
struct DeviationField {
    EvaluationGrid grid;
    std::vector<FieldSlice> slices;
    Eigen::MatrixXd sup_matrix;
    double statistic = 0.0;
};

/**
 * Holds the cumulative periodograms of one series and evaluates
 *
 *   D(v, omega) = (v/T) S_v(floor(omega n_v)) - (v^2/T) S_1(floor(omega T/2)),
 *
 * where S_v sums the periodogram of the first 2 n_v observations over its Fourier
 * frequencies k = 1..n_v and T is the even length T_eff. The full-sample sums are
 * computed once and shared by every v.
 */
class DeviationEvaluator {
public:
    DeviationEvaluator(const MultivariateSeries& series, const EvaluationGrid& grid) : grid_(grid) {
        if (series.length() != grid.t_len && series.length() != grid.t_eff) {
            throw DomainError("grid was built for T=" + std::to_string(grid.t_len) + " but the series has " +
                              std::to_string(series.length()) + " observations");
        }
        dim_ = series.dim();
        full_ = cumulative_periodogram(series, grid.t_eff);
        prefix_.reserve(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const std::size_t n = 2 * grid.half_lengths[i];
            if (n == grid.t_eff) {
                prefix_.push_back(full_);
            } else {
                prefix_.push_back(cumulative_periodogram(series, n));
            }
        }
    }

    [[nodiscard]] const EvaluationGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const CumulativePeriodogram& full() const noexcept { return full_; }
    [[nodiscard]] const CumulativePeriodogram& prefix(std::size_t i) const { return prefix_.at(i); }

    /// D at grid slice i and an arbitrary omega in [0, 1].
    [[nodiscard]] Eigen::MatrixXcd value(std::size_t i, double omega) const {
        if (!(omega >= 0.0 && omega <= 1.0)) throw DomainError("omega must lie in [0, 1]");
        const std::size_t nv = grid_.half_lengths.at(i);
        const auto m_v = static_cast<std::size_t>(std::floor(omega * static_cast<double>(nv)));
        const auto m_1 = static_cast<std::size_t>(std::floor(omega * static_cast<double>(grid_.full_half())));
        return value_at(i, std::min(m_v, nv), std::min(m_1, grid_.full_half()));
    }

    [[nodiscard]] Eigen::MatrixXcd value_at(std::size_t i, std::size_t prefix_index, std::size_t full_index) const {
        const double v = grid_.v(i);
        const double t = static_cast<double>(grid_.t_eff);
        return (v / t) * prefix_[i].partial_sum(prefix_index) - (v * v / t) * full_.partial_sum(full_index);
    }

    [[nodiscard]] SupSummary sup() const {
        const std::size_t dd = dim_ * dim_;
        Eigen::VectorXd best = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dd));
        const double t = static_cast<double>(grid_.t_eff);
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            const double v = grid_.v(i);
            const double c1 = v / t;
            const double c2 = v * v / t;
            grid_.for_each_breakpoint(i, [&](const Breakpoint& bp) {
                const cdouble* sv = prefix_[i].partial_sum(bp.prefix_index).data();
                const cdouble* s1 = full_.partial_sum(bp.full_index).data();
                for (std::size_t e = 0; e < dd; ++e) {
                    const double m = std::abs(c1 * sv[e] - c2 * s1[e]);
                    if (m > best[static_cast<Eigen::Index>(e)]) best[static_cast<Eigen::Index>(e)] = m;
                }
            });
        }
        SupSummary out;
        const auto d = static_cast<Eigen::Index>(dim_);
        out.sup_matrix = Eigen::Map<const Eigen::MatrixXd>(best.data(), d, d);
        out.statistic = out.sup_matrix.norm();
        return out;
    }

    [[nodiscard]] DeviationField field() const {
        DeviationField out;
        out.grid = grid_;
        out.slices.reserve(grid_.size());
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            FieldSlice slice;
            slice.v = grid_.v(i);
            grid_.for_each_breakpoint(i, [&](const Breakpoint& bp) {
                slice.omegas.push_back(bp.omega);
                slice.values.push_back(value_at(i, bp.prefix_index, bp.full_index));
            });
            out.slices.push_back(std::move(slice));
        }
        const auto s = sup();
        out.sup_matrix = s.sup_matrix;
        out.statistic = s.statistic;
        return out;
    }

private:
    EvaluationGrid grid_;
    std::size_t dim_ = 0;
    CumulativePeriodogram full_;
    std::vector<CumulativePeriodogram> prefix_;
};

[[nodiscard]] inline DeviationField deviation_field(const MultivariateSeries& series, const EvaluationGrid& grid) {
    return DeviationEvaluator(series, grid).field();
}

/// Sup matrix and Frobenius statistic without materialising the field.
[[nodiscard]] inline SupSummary deviation_sup(const MultivariateSeries& series, const EvaluationGrid& grid) {
    return DeviationEvaluator(series, grid).sup();
}

using SpectralDensityFn = std::function<Eigen::MatrixXcd(double)>;

/**
 * Covariance of the limiting Gaussian field G at (v1, w1, a1, b1) and (v2, w2, a2, b2):
 *
 *   (1/2pi) v1 v2 (min(v1,v2) - v1 v2) int_0^{min(w1,w2) pi} f_{a1 b2}(l) f_{b1 a2}(-l) dl.
 *
 * Only used to validate simulations, never in the test decision.
 */
[[nodiscard]] inline double limit_covariance_kernel(double v1, double w1, double v2, double w2,
                                                    const SpectralDensityFn& f_bar, std::size_t a1,
                                                    std::size_t b1, std::size_t a2, std::size_t b2) {
    for (const double x : {v1, w1, v2, w2}) {
        if (!(x >= 0.0 && x <= 1.0)) throw DomainError("kernel arguments must lie in [0, 1]");
    }
    const double weight = v1 * v2 * (std::min(v1, v2) - v1 * v2) / (2.0 * std::numbers::pi);
    const double upper = std::min(w1, w2) * std::numbers::pi;
    if (weight == 0.0 || upper == 0.0) return 0.0;
    const auto probe = f_bar(0.0);
    const auto d = static_cast<std::size_t>(probe.rows());
    if (a1 >= d || b1 >= d || a2 >= d || b2 >= d) throw DomainError("component index out of range");
    const auto ia1 = static_cast<Eigen::Index>(a1), ib1 = static_cast<Eigen::Index>(b1);
    const auto ia2 = static_cast<Eigen::Index>(a2), ib2 = static_cast<Eigen::Index>(b2);
    auto integrand = [&](double lambda) {
        return (f_bar(lambda)(ia1, ib2) * f_bar(-lambda)(ib1, ia2)).real();
    };
    double error = 0.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, upper, 15, 1e-8, &error);
    return weight * integral;
}

}  // namespace stationarity
