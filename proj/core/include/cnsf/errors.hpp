#pragma once

#include <stdexcept>
#include <string>

namespace cnsf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameters, mismatched dimensions, violated preconditions.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Geometry that cannot be projected (points behind the source, degenerate rays).
class GeometryError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Malformed or truncated files.
class FormatError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Numerical failure during a computation (quadrature non-convergence, NaN).
class ComputationError : public Error {
  public:
    using Error::Error;
};

} // namespace cnsf
