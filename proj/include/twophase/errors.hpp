#pragma once

#include <stdexcept>
#include <string>

namespace twophase {

/// Argument outside the mathematical domain of an operation (e.g. a
/// nonpositive density).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An operation was called in a context where it is not defined, e.g. the
/// center-manifold coefficient outside the sonic regime.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The eigenvalue sign pattern disagrees with the Mach classification.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shooting did not produce a profile that meets the inflow data. Carries the
/// final boundary mismatch so callers can report how far off it was.
class NoProfileError : public std::runtime_error {
 public:
  NoProfileError(const std::string& what, double mismatch)
      : std::runtime_error(what), mismatch_(mismatch) {}
  double mismatch() const noexcept { return mismatch_; }

 private:
  double mismatch_;
};

/// A velocity or density left the admissible range (nonpositive or NaN).
class BlowUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or incomplete run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A perturbation that breaks positivity, boundary compatibility or the H1
/// budget.
class RejectedPerturbation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twophase
