#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posasym {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes do not agree with the ambient space.
class DimensionError : public Error {
 public:
  DimensionError(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// An argument lies outside the admissible range (negative time, theta outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The input violates a hypothesis the asymptotic results depend on. The CLI maps
/// these to exit code 2.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// Some basis vector never reaches the interior of the cone within the search cap.
class RegularityError : public HypothesisViolation {
 public:
  explicit RegularityError(std::size_t basis_index, const std::string& detail = {})
      : HypothesisViolation("regularity condition 1 fails at basis vector " +
                            std::to_string(basis_index + 1) +
                            (detail.empty() ? std::string{} : ": " + detail)),
        basis_index_(basis_index) {}

  /// Zero-based index of the offending basis vector.
  std::size_t basis_index() const noexcept { return basis_index_; }

 private:
  std::size_t basis_index_;
};

/// An iteration did not reach its tolerance within the step budget.
class ConvergenceError : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

/// Malformed input files or unreadable paths. The CLI maps these to exit code 1.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace posasym
