#pragma once
#include <stdexcept>

namespace diskflow {

// Base class for all solver failures so callers can map them to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: parameter ranges, malformed config, inconsistent profiles.
struct ConfigError : Error {
    using Error::Error;
};

// An iteration exhausted its budget without reaching tolerance.
struct DivergenceError : Error {
    using Error::Error;
};

// Numerical breakdown: non-finite samples, failed calibration, bad data.
struct NumericalError : Error {
    using Error::Error;
};

// A far-field integral whose fitted decay exponent cannot support the
// requested power weight.
struct DivergentTailError : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace diskflow
