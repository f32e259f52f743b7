#pragma once

#include <stdexcept>
#include <string>

namespace stationarity {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual const char* kind() const noexcept { return "Error"; }
};

/// Malformed CSV input. Row and column are 1-based data coordinates (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
        : Error(what), row_(row), column_(column) {}
    [[nodiscard]] const char* kind() const noexcept override { return "ParseError"; }
    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class TooShort : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "TooShort"; }
};

class DomainError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "DomainError"; }
};

/// Singular or rank-deficient data (zero variance, exact linear recursions, ...).
class DegenerateData : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "DegenerateData"; }
};

class NumericalError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "NumericalError"; }
};

/// A fitted VAR whose companion matrix has spectral radius >= 1.
class UnstableModel : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "UnstableModel"; }
};

}  // namespace stationarity
