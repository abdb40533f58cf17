#pragma once

#include <stdexcept>
#include <string>

namespace itl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input files that do not follow the documented schema.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Bad or missing configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A computation that needs a single synchronous island received more than one.
class ConnectivityError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Raised when a missing value cannot be filled from the available data.
class ImputationError : public Error {
 public:
  using Error::Error;
};

/// The PTDF does not cover the lines or buses a caller asked about.
class MismatchError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace itl
