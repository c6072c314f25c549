#pragma once

#include <stdexcept>
#include <string>

namespace ssk {

// Argument outside the mathematical domain of an operation (e.g. |x| > 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Parameters fall outside the region where the replica-symmetric solution is
// unique and (I - M) is safely invertible.
class RegionError : public std::runtime_error {
 public:
  explicit RegionError(const std::string& detail)
      : std::runtime_error("outside validated high-temperature region: " + detail) {}
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ssk
