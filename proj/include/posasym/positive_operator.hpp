#pragma once

#include <optional>

#include "posasym/linalg.hpp"
#include "posasym/ordered_space.hpp"

namespace posasym {

/// A dense entrywise-nonnegative square matrix, i.e. a positive operator on the orthant.
class PositiveOperator {
 public:
  /// Throws DomainError naming the first negative (or non-finite) entry.
  PositiveOperator(ConeSpace space, Matrix matrix, std::optional<double> norm_bound = std::nullopt);
  explicit PositiveOperator(const Matrix& matrix);

  const ConeSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return space_.dim(); }

  /// Certified sup_n ||A^n||, when known.
  const std::optional<double>& norm_bound() const noexcept { return norm_bound_; }

  Vector apply(const Vector& x) const;

 private:
  ConeSpace space_;
  Matrix matrix_;
  std::optional<double> norm_bound_;
};

/// ||A u - u||_u <= tol * ||u||_u
bool fixes_unit(const PositiveOperator& a, const OrderUnit& unit, double tol);

}  // namespace posasym
