#pragma once

#include <stdexcept>
#include <string>

namespace slicing {

// Invalid or infeasible run configuration (bad grids, empty decision space,
// out-of-range learner parameters, malformed config files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A closed-form model produced a non-finite value.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested data was not recorded for this run (e.g. probability snapshots).
class UnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slicing
