#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sosdim {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatch, non-finite values, out-of-range q.
class InvalidInput : public Error {
public:
    using Error::Error;
};

class LagTooLarge : public InvalidInput {
public:
    LagTooLarge(std::size_t lag, std::size_t length)
        : InvalidInput("lag " + std::to_string(lag) + " must be smaller than the series length " +
                       std::to_string(length)),
          lag_(lag), length_(length) {}

    std::size_t lag() const noexcept { return lag_; }
    std::size_t length() const noexcept { return length_; }

private:
    std::size_t lag_;
    std::size_t length_;
};

/// The covariance matrix has an eigenvalue below the relative floor, so no
/// whitening transform exists.
class NearSingularCovariance : public Error {
public:
    NearSingularCovariance(double eigenvalue, double floor)
        : Error("near-singular covariance: eigenvalue " + std::to_string(eigenvalue) +
                " is below the floor " + std::to_string(floor)),
          eigenvalue_(eigenvalue), floor_(floor) {}

    double eigenvalue() const noexcept { return eigenvalue_; }
    double floor() const noexcept { return floor_; }

private:
    double eigenvalue_;
    double floor_;
};

/// CSV ingestion failure. Row and column are 1-based; row counts the header
/// line when one is present.
class ParseError : public InvalidInput {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& what)
        : InvalidInput("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " +
                       what),
          row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace sosdim
