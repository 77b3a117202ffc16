// errors.hpp — exception taxonomy mapped to CLI exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace eml {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments or parameter values (CLI exit 2).
struct UsageError : Error {
    using Error::Error;
};

// Malformed or inconsistent input data/files (CLI exit 3).
struct DataFormatError : Error {
    using Error::Error;
};

// Optimizer failed to converge or the normal matrix is singular (CLI exit 4).
struct FitError : Error {
    using Error::Error;
};

// Analysis that cannot proceed on the given inputs, e.g. raw width not above
// the instrument width (CLI exit 5).
struct InfeasibleError : Error {
    using Error::Error;
};

// Integrator step-size guard tripped.
struct StabilityError : UsageError {
    using UsageError::UsageError;
};

}  // namespace eml
