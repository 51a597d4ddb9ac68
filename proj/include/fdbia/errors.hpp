// SPDX-License-Identifier: Apache-2.0
//
// Error hierarchy shared by all fdbia modules. Config-class errors map to
// CLI exit code 1, numerical-class errors to exit code 2.

#ifndef FDBIA_ERRORS_HPP
#define FDBIA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fdbia {

/// Base of everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad inputs: invalid dimensions, ranges, topologies, allocations, scenarios.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidDimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidRangeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnsupportedTopologyError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidAllocationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidScenarioError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Numerical failures at runtime (rank deficiency on a probability-zero set,
/// singular solves, non-finite data).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateChannelError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace fdbia

#endif  // FDBIA_ERRORS_HPP
