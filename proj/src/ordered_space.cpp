#include "posasym/ordered_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "posasym/errors.hpp"

namespace posasym {

ConeSpace::ConeSpace(std::size_t dim, double interior_tol) : dim_(dim), interior_tol_(interior_tol) {
  if (dim == 0) throw DomainError("cone space dimension must be at least 1");
  if (!(interior_tol >= 0.0) || !std::isfinite(interior_tol)) {
    throw DomainError("interior tolerance must be a finite nonnegative number");
  }
}

void ConeSpace::check(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw DimensionError(dim_, x.size());
}

void ConeSpace::check(const Matrix& a) const {
  if (static_cast<std::size_t>(a.rows()) != dim_) throw DimensionError(dim_, a.rows());
  if (static_cast<std::size_t>(a.cols()) != dim_) throw DimensionError(dim_, a.cols());
}

bool in_cone(const ConeSpace& space, const Vector& x) {
  space.check(x);
  return (x.array() >= 0.0).all();
}

bool in_interior(const ConeSpace& space, const Vector& x) {
  space.check(x);
  const double threshold = space.interior_tol() * std::max(1.0, max_norm(x));
  return x.minCoeff() > threshold;
}

OrderUnit::OrderUnit(ConeSpace space, Vector u) : space_(space), u_(std::move(u)), norm_constant_(1.0) {
  space_.check(u_);
  if (!u_.allFinite()) throw DomainError("order unit has non-finite components");
  const double largest = u_.maxCoeff();
  const double threshold = space_.interior_tol() * largest;
  for (Eigen::Index i = 0; i < u_.size(); ++i) {
    if (!(u_(i) > threshold) || !(u_(i) > 0.0)) {
      throw DomainError("order unit is not interior: component " + std::to_string(i + 1) +
                        " is not strictly positive");
    }
  }
  norm_constant_ = std::max(largest, 1.0 / u_.minCoeff());
}

OrderUnit OrderUnit::ones(const ConeSpace& space) {
  return OrderUnit(space, Vector::Ones(static_cast<Eigen::Index>(space.dim())));
}

double u_norm(const OrderUnit& unit, const Vector& x) {
  unit.space().check(x);
  return x.cwiseAbs().cwiseQuotient(unit.u()).maxCoeff();
}

std::pair<Vector, Vector> nonflat_decompose(const OrderUnit& unit, const Vector& x) {
  unit.space().check(x);
  return {x.cwiseMax(0.0), (-x).cwiseMax(0.0)};
}

Vector DualBase::extreme_point(std::size_t i) const {
  Vector f = basis_vector(size(), i);
  f /= unit_.u()(static_cast<Eigen::Index>(i));
  return f;
}

double DualBase::evaluate(std::size_t i, const Vector& x) const {
  unit_.space().check(x);
  if (i >= size()) throw DimensionError(size(), i + 1);
  const auto k = static_cast<Eigen::Index>(i);
  return x(k) / unit_.u()(k);
}

double DualBase::sup(const Vector& x) const {
  unit_.space().check(x);
  return x.cwiseQuotient(unit_.u()).maxCoeff();
}

double DualBase::inf(const Vector& x) const {
  unit_.space().check(x);
  return x.cwiseQuotient(unit_.u()).minCoeff();
}

}  // namespace posasym
