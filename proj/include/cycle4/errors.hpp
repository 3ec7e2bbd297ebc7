#pragma once

#include <stdexcept>
#include <string>

namespace cycle4 {

/// Base for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Eigenvalue polishing left a residual above tolerance.
struct SolverError : Error {
    using Error::Error;
};

struct NotAnEigenvalue : Error {
    using Error::Error;
};

/// Operation only defined in the tight regime (3m + M > 2*pi).
struct RegimeError : Error {
    using Error::Error;
};

struct NotOnCurve : Error {
    using Error::Error;
};

struct NotStrictInterior : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct VerificationError : Error {
    using Error::Error;
};

struct SamplerExhausted : Error {
    using Error::Error;
};

} // namespace cycle4
