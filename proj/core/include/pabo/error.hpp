#pragma once

#include <stdexcept>
#include <string>

namespace pabo {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration: bad search space, table, template or manifest.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Numerical failure, e.g. a kernel matrix that stays indefinite after
/// the full jitter escalation.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

}  // namespace pabo
