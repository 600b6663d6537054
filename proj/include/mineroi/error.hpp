#pragma once

#include <stdexcept>
#include <string>

namespace mineroi {

// Base of all library errors. The CLI maps subtypes to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid numeric input to a pure computation (negative power, non-finite ROI, ...).
struct DomainError : Error {
    using Error::Error;
};

// Bad user-supplied input: malformed files, schema violations, config mistakes.
struct InputError : Error {
    using Error::Error;
};

// Missing days or gaps in a series that must be contiguous.
struct CoverageError : InputError {
    using InputError::InputError;
};

struct ConfigError : InputError {
    using InputError::InputError;
};

// Operation is valid but the data does not reach far enough (e.g. not enough
// history to form a window).
struct PreconditionError : Error {
    using Error::Error;
};

// Programming errors: backward without forward, shape mismatches between
// internally produced tensors.
struct LogicError : Error {
    using Error::Error;
};

}  // namespace mineroi
