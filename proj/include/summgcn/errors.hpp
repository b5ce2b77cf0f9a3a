#pragma once

#include <stdexcept>
#include <string>

namespace summgcn {

// Error taxonomy. The CLI maps these onto exit codes:
// ConfigError -> 2, DataError (and subclasses) -> 3, NumericError -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration: bad keys, bad values, inconsistent options.
struct ConfigError : Error {
    using Error::Error;
};

// Bad or missing input data, undefined quantities over given data.
struct DataError : Error {
    using Error::Error;
};

// Malformed input file; carries the 1-based line number.
struct ParseError : DataError {
    ParseError(std::size_t line_number, const std::string& message)
        : DataError("line " + std::to_string(line_number) + ": " + message),
          line(line_number) {}
    std::size_t line;
};

// Guard tripped: a computation refused because it would exceed a size bound.
struct SizeError : DataError {
    using DataError::DataError;
};

// Shape or vocabulary mismatch between models that should be compatible.
struct IncompatibleError : DataError {
    using DataError::DataError;
};

// NaN/Inf detected at a numeric checkpoint.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace summgcn
