#pragma once

#include <stdexcept>
#include <string>

namespace hofa {

// Bad inputs: dimension/modulus mismatches, malformed files, violated
// preconditions. The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request would enumerate more points than the configured budget allows.
// Carries the count that would be required. CLI exit code 3.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double required, double budget)
      : std::runtime_error(what + " (required " + std::to_string(required) +
                           ", budget " + std::to_string(budget) + ")"),
        required_(required),
        budget_(budget) {}

  double required() const noexcept { return required_; }
  double budget() const noexcept { return budget_; }

 private:
  double required_;
  double budget_;
};

// Two forms in a system are scalar multiples of one another; several
// complexity notions have no finite value in that case.
class ScalarMultipleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace hofa
