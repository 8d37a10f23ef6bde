#pragma once

#include <stdexcept>
#include <string>

namespace levyifpt {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad inputs: invalid models, parameters outside their contract.
/// The CLI maps these to exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

/// Failures of the numerical machinery on otherwise valid inputs.
/// The CLI maps these to exit code 3.
struct NumericalError : Error {
    using Error::Error;
};

struct OutOfRange : ValidationError {
    using ValidationError::ValidationError;
};

struct NotNegativeDrift : ValidationError {
    using ValidationError::ValidationError;
};

struct LambdaExceedsStar : ValidationError {
    using ValidationError::ValidationError;
};

struct MomentCondition : ValidationError {
    using ValidationError::ValidationError;
};

struct EmptySample : ValidationError {
    using ValidationError::ValidationError;
};

struct PoleEvaluation : NumericalError {
    using NumericalError::NumericalError;
};

struct RepeatedRoots : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateModel : NumericalError {
    using NumericalError::NumericalError;
};

struct QuadratureFailure : NumericalError {
    using NumericalError::NumericalError;
};

struct InversionFailure : NumericalError {
    using NumericalError::NumericalError;
};

struct InsufficientPaths : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace levyifpt
