#pragma once

#include "stationarity/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stationarity {

/// Shortest series accepted by the test pipeline.
inline constexpr std::size_t kMinSeriesLength = 8;

/**
 * T x d observation matrix, one time point per row and one component per column.
 *
 * Immutable once constructed. All entries are finite. When the series has been
 * centered, `means()` holds the column means that were subtracted.
 */
class MultivariateSeries {
public:
    MultivariateSeries() = default;

    explicit MultivariateSeries(Eigen::MatrixXd values) : values_(std::move(values)) {
        if (values_.rows() == 0 || values_.cols() == 0) {
            throw DomainError("series must have at least one row and one column");
        }
        if (!values_.allFinite()) {
            throw DomainError("series contains non-finite values");
        }
        means_ = Eigen::VectorXd::Zero(values_.cols());
    }

    [[nodiscard]] std::size_t length() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    /// Even length 2*floor(T/2) used by every spectral computation.
    [[nodiscard]] std::size_t effective_length() const noexcept { return 2 * (length() / 2); }
    [[nodiscard]] bool centered() const noexcept { return centered_; }
    [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
    [[nodiscard]] const Eigen::VectorXd& means() const noexcept { return means_; }
    [[nodiscard]] double operator()(std::size_t t, std::size_t a) const {
        return values_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(a));
    }

    /// First `n` observations, keeping the centering record.
    [[nodiscard]] MultivariateSeries head(std::size_t n) const {
        if (n == 0 || n > length()) {
            throw DomainError("head length out of range");
        }
        MultivariateSeries out(values_.topRows(static_cast<Eigen::Index>(n)));
        out.centered_ = centered_;
        out.means_ = means_;
        return out;
    }

    /// Selected components in the given order.
    [[nodiscard]] MultivariateSeries columns(const std::vector<std::size_t>& idx) const {
        Eigen::MatrixXd sub(values_.rows(), static_cast<Eigen::Index>(idx.size()));
        Eigen::VectorXd m(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (idx[j] >= dim()) {
                throw DomainError("component index out of range");
            }
            sub.col(static_cast<Eigen::Index>(j)) = values_.col(static_cast<Eigen::Index>(idx[j]));
            m(static_cast<Eigen::Index>(j)) = means_(static_cast<Eigen::Index>(idx[j]));
        }
        MultivariateSeries out(std::move(sub));
        out.centered_ = centered_;
        out.means_ = std::move(m);
        return out;
    }

    [[nodiscard]] MultivariateSeries scaled(double c) const {
        MultivariateSeries out(values_ * c);
        out.centered_ = centered_;
        out.means_ = means_ * c;
        return out;
    }

    friend MultivariateSeries center(const MultivariateSeries& series);

private:
    Eigen::MatrixXd values_;
    Eigen::VectorXd means_;
    bool centered_ = false;
};

/// Subtracts column means. Idempotent up to rounding; accumulates the removed means.
[[nodiscard]] inline MultivariateSeries center(const MultivariateSeries& series) {
    const Eigen::RowVectorXd mu = series.values_.colwise().mean();
    MultivariateSeries out(series.values_.rowwise() - mu);
    out.centered_ = true;
    out.means_ = series.means_ + mu.transpose();
    return out;
}

struct CsvOptions {
    bool has_header = false;
    bool center = false;
    std::size_t min_rows = kMinSeriesLength;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

inline double parse_field(std::string_view field, std::size_t row, std::size_t col) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
    if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << "cannot parse '" << field << "' as a finite number at row " << row << ", column " << col;
        throw ParseError(msg.str(), row, col);
    }
    return value;
}

}  // namespace detail

/// Parses CSV text. Rows are 1-based data rows (the header is not counted).
[[nodiscard]] inline MultivariateSeries parse_csv(std::istream& in, const CsvOptions& opts = {}) {
    std::vector<double> data;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    bool header_pending = opts.has_header;
    while (std::getline(in, line)) {
        const auto view = detail::trim(line);
        if (view.empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        ++rows;
        const auto fields = detail::split_fields(view);
        if (cols == 0) {
            cols = fields.size();
        } else if (fields.size() != cols) {
            std::ostringstream msg;
            msg << "row " << rows << " has " << fields.size() << " fields, expected " << cols;
            throw ParseError(msg.str(), rows, 0);
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            data.push_back(detail::parse_field(fields[c], rows, c + 1));
        }
    }
    if (rows < opts.min_rows || rows == 0) {
        std::ostringstream msg;
        msg << "series has " << rows << " rows, at least " << std::max<std::size_t>(opts.min_rows, 1)
            << " required";
        throw TooShort(msg.str());
    }
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[r * cols + c];
    MultivariateSeries series(std::move(values));
    return opts.center ? center(series) : series;
}

[[nodiscard]] inline MultivariateSeries load_csv(const std::string& path, const CsvOptions& opts = {}) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    return parse_csv(in, opts);
}

/// Shortest round-trip decimal representation.
[[nodiscard]] inline std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

inline void write_csv(std::ostream& out, const MultivariateSeries& series,
                      const std::vector<std::string>& header = {}) {
    if (!header.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
        out << '\n';
    }
    for (std::size_t t = 0; t < series.length(); ++t) {
        for (std::size_t a = 0; a < series.dim(); ++a) {
            out << (a ? "," : "") << format_double(series(t, a));
        }
        out << '\n';
    }
}

}  // namespace stationarity
