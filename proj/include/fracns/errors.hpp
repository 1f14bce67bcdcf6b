#pragma once

#include <stdexcept>
#include <string>

namespace fracns {

/// Argument outside the mathematical domain of a formula or operator.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Rescaled wavenumbers no longer fit on the lattice.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class GridMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Schema or value violation in a run/sweep configuration. `field` names the
/// offending key (dotted path) when one can be identified.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A coefficient became non-finite during time integration.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(double last_good_time, const std::string& message)
      : std::runtime_error(message), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

}  // namespace fracns
