#pragma once

#include "stationarity/errors.hpp"
#include "stationarity/series.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace stationarity {

using cdouble = std::complex<double>;

/// Periodogram or spectral density value at one frequency. Hermitian, real nonnegative diagonal.
struct SpectralMatrix {
    Eigen::MatrixXcd entries;
    double frequency = 0.0;
    std::size_t base = 0;
};

/// lambda_{k,n} = 2 pi k / n for 1 <= k <= n.
[[nodiscard]] inline double fourier_frequency(std::size_t k, std::size_t n) {
    if (n == 0 || k < 1 || k > n) {
        throw DomainError("Fourier frequency index out of range");
    }
    return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
}

[[nodiscard]] constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

/// In-place iterative radix-2 forward transform, X_k = sum_s x_s exp(-2 pi i k s / n).
inline void fft_radix2(std::vector<cdouble>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < half; ++j) {
                // Twiddles from the angle directly; the recurrence w *= wlen drifts at large n.
                const cdouble w = std::polar(1.0, ang * static_cast<double>(j));
                const cdouble u = a[i + j];
                const cdouble v = a[i + j + half] * w;
                a[i + j] = u + v;
                a[i + j + half] = u - v;
            }
        }
    }
}

/// Direct O(n^2) evaluation of the same transform, used when n is not a power of two.
inline std::vector<cdouble> dft_direct(const std::vector<cdouble>& x) {
    const std::size_t n = x.size();
    std::vector<cdouble> roots(n);
    for (std::size_t j = 0; j < n; ++j) {
        roots[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    }
    std::vector<cdouble> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cdouble acc{0.0, 0.0};
        for (std::size_t s = 0; s < n; ++s) acc += x[s] * roots[(k * s) % n];
        out[k] = acc;
    }
    return out;
}

}  // namespace detail

/**
 * Finite Fourier transform of the first n observations.
 *
 * Row k of the result (k = 0..n-1) is D(lambda_{k,n}) = sum_{s=0}^{n-1} X_{1+s} exp(-i lambda s);
 * row 0 doubles as k = n.
 */
[[nodiscard]] inline Eigen::MatrixXcd finite_fourier_transform(const MultivariateSeries& series, std::size_t n) {
    if (n == 0 || n > series.length()) {
        throw DomainError("transform length exceeds series length");
    }
    const std::size_t d = series.dim();
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::vector<cdouble> buf(n);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t s = 0; s < n; ++s) buf[s] = cdouble(series(s, a), 0.0);
        if (is_power_of_two(n)) {
            detail::fft_radix2(buf);
        } else {
            buf = detail::dft_direct(buf);
        }
        for (std::size_t k = 0; k < n; ++k) out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a)) = buf[k];
    }
    return out;
}

namespace detail {

inline void check_periodogram_base(const MultivariateSeries& series, std::size_t n) {
    if (n == 0 || n % 2 != 0) {
        throw DomainError("periodogram base must be a positive even integer");
    }
    if (n > series.effective_length()) {
        throw DomainError("periodogram base exceeds the (even) series length");
    }
}

/// Outer product D D^H / (2 pi n), filled so that the result is exactly Hermitian.
inline void outer_periodogram(const Eigen::MatrixXcd& transform, std::size_t row, std::size_t n,
                              Eigen::Ref<Eigen::MatrixXcd> out) {
    const Eigen::Index d = transform.cols();
    const double scale = 1.0 / (2.0 * std::numbers::pi * static_cast<double>(n));
    const auto r = static_cast<Eigen::Index>(row);
    for (Eigen::Index a = 0; a < d; ++a) {
        const cdouble da = transform(r, a);
        out(a, a) = cdouble(std::norm(da) * scale, 0.0);
        for (Eigen::Index b = a + 1; b < d; ++b) {
            const cdouble v = da * std::conj(transform(r, b)) * scale;
            out(a, b) = v;
            out(b, a) = std::conj(v);
        }
    }
}

}  // namespace detail

/// I_n(lambda_{k,n}) = D D^H / (2 pi n) from the first n observations, 1 <= k <= n.
[[nodiscard]] inline SpectralMatrix periodogram_matrix(const MultivariateSeries& series, std::size_t n, std::size_t k) {
    detail::check_periodogram_base(series, n);
    const double lambda = fourier_frequency(k, n);
    const auto transform = finite_fourier_transform(series, n);
    SpectralMatrix out;
    out.entries.resize(static_cast<Eigen::Index>(series.dim()), static_cast<Eigen::Index>(series.dim()));
    detail::outer_periodogram(transform, k % n, n, out.entries);
    out.frequency = lambda;
    out.base = n;
    return out;
}

/**
 * Partial sums S(m) = sum_{k=1}^m I_n(lambda_{k,n}) for m = 0..n/2.
 *
 * Stored contiguously: column m of the backing matrix is S(m) flattened column-major.
 */
class CumulativePeriodogram {
public:
    CumulativePeriodogram() = default;
    CumulativePeriodogram(std::size_t base, std::size_t dim, Eigen::MatrixXcd sums)
        : base_(base), dim_(dim), sums_(std::move(sums)) {}

    [[nodiscard]] std::size_t base() const noexcept { return base_; }
    [[nodiscard]] std::size_t half() const noexcept { return base_ / 2; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    [[nodiscard]] Eigen::Map<const Eigen::MatrixXcd> partial_sum(std::size_t m) const {
        if (m > half()) throw DomainError("partial sum index out of range");
        const auto d = static_cast<Eigen::Index>(dim_);
        return {sums_.col(static_cast<Eigen::Index>(m)).data(), d, d};
    }

private:
    std::size_t base_ = 0;
    std::size_t dim_ = 0;
    Eigen::MatrixXcd sums_;
};

[[nodiscard]] inline CumulativePeriodogram cumulative_periodogram(const MultivariateSeries& series, std::size_t n) {
    detail::check_periodogram_base(series, n);
    const std::size_t d = series.dim();
    const std::size_t half = n / 2;
    const auto transform = finite_fourier_transform(series, n);
    const auto dd = static_cast<Eigen::Index>(d * d);
    Eigen::MatrixXcd sums = Eigen::MatrixXcd::Zero(dd, static_cast<Eigen::Index>(half + 1));
    Eigen::MatrixXcd term(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 1; k <= half; ++k) {
        detail::outer_periodogram(transform, k, n, term);
        sums.col(static_cast<Eigen::Index>(k)) =
            sums.col(static_cast<Eigen::Index>(k - 1)) + term.reshaped();
    }
    return {n, d, std::move(sums)};
}

}  // namespace stationarity
