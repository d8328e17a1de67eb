#pragma once

#include <stdexcept>
#include <string>

namespace lattice {

// Raised when a derivative evaluator is queried outside the open interval
// on which it is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a sampled hypothesis check fails. `witness()` is the sample
// point at which the violation was observed.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(const std::string& what, double witness)
      : std::invalid_argument(what + " (witness x = " + std::to_string(witness) + ")"),
        witness_(witness) {}

  double witness() const noexcept { return witness_; }

 private:
  double witness_;
};

// Raised by iterative numerics that failed to reach their tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved_error() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace lattice
