#pragma once

#include <stdexcept>
#include <string>

namespace magcat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input that violates a contract of the caller (bad sizes, bad values).
class DimensionError : public Error {
  public:
    using Error::Error;
};
class DomainError : public Error {
  public:
    using Error::Error;
};
class PhysicalityError : public Error {
  public:
    using Error::Error;
};
/// Physical parameters outside their admissible range.
class ParameterError : public Error {
  public:
    using Error::Error;
};
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Failures of the numerics themselves. The CLI maps these to exit code 2.
class NumericalError : public Error {
  public:
    using Error::Error;
};
class IntegrabilityError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};
class DegenerateHeraldError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};
class ZeroProbabilityError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};
class UnstableRegimeError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};
class NormalizationError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};
class DegenerateCatError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};
class HorizonError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};
class StabilityError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

}  // namespace magcat
