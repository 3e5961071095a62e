#include "posasym/positive_operator.hpp"

#include <cmath>
#include <string>

#include "posasym/errors.hpp"

namespace posasym {

PositiveOperator::PositiveOperator(ConeSpace space, Matrix matrix, std::optional<double> norm_bound)
    : space_(space), matrix_(std::move(matrix)), norm_bound_(norm_bound) {
  space_.check(matrix_);
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
      const double v = matrix_(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw DomainError("operator is not positive: entry (" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ") = " + std::to_string(v));
      }
    }
  }
  if (norm_bound_ && !(*norm_bound_ >= 0.0)) throw DomainError("norm bound must be nonnegative");
}

PositiveOperator::PositiveOperator(const Matrix& matrix)
    : PositiveOperator(ConeSpace(static_cast<std::size_t>(matrix.rows())), matrix) {}

Vector PositiveOperator::apply(const Vector& x) const {
  space_.check(x);
  return matrix_ * x;
}

bool fixes_unit(const PositiveOperator& a, const OrderUnit& unit, double tol) {
  if (a.dim() != unit.dim()) throw DimensionError(a.dim(), unit.dim());
  const Vector residual = a.matrix() * unit.u() - unit.u();
  return u_norm(unit, residual) <= tol * u_norm(unit, unit.u());
}

}  // namespace posasym
