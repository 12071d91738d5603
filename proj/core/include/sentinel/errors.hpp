#pragma once

#include <stdexcept>
#include <string>

namespace sentinel {

/// Base of every error the toolkit throws. The three subclasses map onto the
/// CLI exit codes (2 parameter, 3 data, 4 numerical).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter or configuration value (lag, dimension, split, slack...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to converge or produced a non-finite result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sentinel
