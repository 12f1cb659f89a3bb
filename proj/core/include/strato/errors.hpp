#pragma once

#include <stdexcept>
#include <string>

namespace strato {

// Input outside the region where a formula is defined (e.g. u^2 >= 2 i0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A structural invariant of a value or field does not hold.
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative solver stopped without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations, double last_residual)
      : std::runtime_error(what), iterations_(iterations), last_residual_(last_residual) {}

  int iterations() const noexcept { return iterations_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  int iterations_;
  double last_residual_;
};

// The shear profile reached zero before the edge velocity.
class PrematureSeparationError : public std::runtime_error {
 public:
  PrematureSeparationError(const std::string& what, double u_zero)
      : std::runtime_error(what), u_zero_(u_zero) {}

  double u_zero() const noexcept { return u_zero_; }

 private:
  double u_zero_;
};

}  // namespace strato
