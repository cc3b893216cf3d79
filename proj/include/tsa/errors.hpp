#pragma once

#include <stdexcept>
#include <string>

namespace tsa {

/// Bad or inconsistent input data (unreadable file, duplicate dates, gaps
/// where none are allowed, ...).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested column absent from a CSV header. Split out from DataError so
/// the CLI can map it to a usage error and list the available columns.
struct ColumnNotFoundError : DataError {
    explicit ColumnNotFoundError(const std::string& what) : DataError(what) {}
};

/// Numerical failure: singular system, rank deficiency, non-PD Hessian, ...
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tsa
