#pragma once

#include <stdexcept>
#include <string>

namespace vigraal {

/// A point left the (closure of the) domain of a Legendre function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent or inadmissible configuration, detected before any iteration runs.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An oracle could not produce its reference value (bracket failure, no convergence).
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vigraal
