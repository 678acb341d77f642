#pragma once

#include <stdexcept>
#include <string>

namespace lrb {

// Argument lies outside the mathematical domain of an operation
// (coordinates off the lattice, negative weights, mu < 1 for the anharmonic bound, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A Fourier sum hit gamma(k) = 0 where 1/gamma(k) is required.
class singular_mode_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Violated precondition that is not a pure domain issue
// (lattice mismatch, overlapping supports, kernel/time mismatch).
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An improper integral failed to converge; carries the partial value.
class divergence_error : public std::runtime_error {
 public:
  divergence_error(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(what), partial_(partial), error_estimate_(error_estimate) {}

  double partial_value() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

// A numerical result failed its own convergence gate (truncated Fock space, eigensolver).
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrb
