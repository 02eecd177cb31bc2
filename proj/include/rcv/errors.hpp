#pragma once

#include <stdexcept>
#include <string>

namespace rcv {

/// Base of every error the library throws. Callers that only need to know
/// "this computation failed" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid distribution or GLD parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain (p not in (0,1), x off support).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Root not bracketed, quadrature did not converge, iteration limit hit.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A measure or estimate is undefined for this input (zero median, constant sample).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Sample too small for the requested operation.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Method-of-moments GLD fit found no admissible solution.
class FitFailure : public Error {
 public:
  using Error::Error;
};

/// An interval procedure cannot produce finite ordered bounds for this sample.
class MethodFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (CSV rows, config documents).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace rcv
