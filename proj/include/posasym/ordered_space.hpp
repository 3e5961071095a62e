#pragma once

// Order structure of R^d ordered by the nonnegative orthant K.
//
// The background norm is the max norm. For an order unit u (a strictly positive
// vector) the u-norm is ||x||_u = inf{l >= 0 : -l u <= x <= l u} = max_i |x_i| / u_i,
// and the base F_u = {f in K' : f(u) = 1} of the dual cone is the convex hull of the
// scaled coordinate functionals e_i / u_i. Every sup or inf over F_u therefore
// reduces to a max or min over d numbers.

#include <cstddef>
#include <utility>

#include "posasym/linalg.hpp"

namespace posasym {

/// Ambient dimension plus the relative threshold used for strict positivity.
class ConeSpace {
 public:
  explicit ConeSpace(std::size_t dim, double interior_tol = 0.0);

  std::size_t dim() const noexcept { return dim_; }
  double interior_tol() const noexcept { return interior_tol_; }

  /// Throws DimensionError unless x has length dim().
  void check(const Vector& x) const;
  void check(const Matrix& a) const;

  friend bool operator==(const ConeSpace&, const ConeSpace&) = default;

 private:
  std::size_t dim_;
  double interior_tol_;
};

/// x in K: every component >= 0, no tolerance.
bool in_cone(const ConeSpace& space, const Vector& x);

/// x in Int(K): min_i x_i > interior_tol * max(1, max_i |x_i|).
bool in_interior(const ConeSpace& space, const Vector& x);

/// An interior vector u together with the constants that tie the u-norm to the
/// max norm: C_u^{-1} ||x|| <= ||x||_u <= C_u ||x|| and the nonflatness constant gamma.
class OrderUnit {
 public:
  OrderUnit(ConeSpace space, Vector u);

  /// u = (1, ..., 1); the u-norm coincides with the max norm.
  static OrderUnit ones(const ConeSpace& space);

  const ConeSpace& space() const noexcept { return space_; }
  const Vector& u() const noexcept { return u_; }
  std::size_t dim() const noexcept { return space_.dim(); }

  /// max(max_i u_i, 1 / min_i u_i)
  double norm_constant() const noexcept { return norm_constant_; }
  /// Every x splits as x1 - x2 with x1, x2 in K and ||x_k|| <= gamma ||x||; 1 for the orthant.
  double gamma() const noexcept { return 1.0; }

 private:
  ConeSpace space_;
  Vector u_;
  double norm_constant_;
};

/// max_i |x_i| / u_i
double u_norm(const OrderUnit& unit, const Vector& x);

/// Positive and negative parts: x = x1 - x2 with x1, x2 in K.
std::pair<Vector, Vector> nonflat_decompose(const OrderUnit& unit, const Vector& x);

/// Extreme points of F_u, i.e. the functionals x -> x_i / u_i.
class DualBase {
 public:
  explicit DualBase(OrderUnit unit) : unit_(std::move(unit)) {}

  const OrderUnit& unit() const noexcept { return unit_; }
  std::size_t size() const noexcept { return unit_.dim(); }

  /// The i-th extreme functional as a coefficient vector (e_i / u_i).
  Vector extreme_point(std::size_t i) const;

  /// f_i(x) = x_i / u_i
  double evaluate(std::size_t i, const Vector& x) const;

  /// sup_{f in F_u} f(x), attained at an extreme point.
  double sup(const Vector& x) const;
  /// inf_{f in F_u} f(x)
  double inf(const Vector& x) const;

 private:
  OrderUnit unit_;
};

}  // namespace posasym
