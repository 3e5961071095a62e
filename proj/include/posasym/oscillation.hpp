#pragma once

// Oscillation of a trajectory n -> A^n x relative to an order unit u with A u = u.
//
//   upper(n) = max_i (A^n x)_i / u_i     (sup over the dual base F_u)
//   lower(n) = min_i (A^n x)_i / u_i     (inf over F_u)
//   delta(n) = upper(n) - lower(n)
//
// Because A fixes u and is positive, upper is nonincreasing, lower is nondecreasing,
// and lower(n) u <= A^n x <= upper(n) u for x in K. When some power A^p pushes every
// normalized extreme ray into the interior with margin beta, the oscillation
// contracts geometrically: delta(kp) <= (1 - 2 beta)^k delta(0).

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "posasym/linalg.hpp"
#include "posasym/ordered_space.hpp"
#include "posasym/positive_operator.hpp"

namespace posasym {

struct OscillationBounds {
  double upper = 0.0;
  double lower = 0.0;

  double delta() const noexcept { return upper - lower; }
};

struct OscillationStep {
  std::size_t n = 0;
  double upper = 0.0;
  double lower = 0.0;

  double delta() const noexcept { return upper - lower; }
};

enum class TraceStatus { kConverged, kStepLimit };

struct TraceOptions {
  /// Convergence when delta(n) <= max(eps * delta(0), delta_floor).
  double eps = 1e-10;
  double delta_floor = 1e-14;
  std::size_t max_steps = 100000;
  /// Accepts u as a fixed point when ||A u - u||_u <= fixed_point_tol * ||u||_u.
  double fixed_point_tol = 1e-9;
  /// Relative slack for the monotone nesting lower(n) <= lower(n+1) <= upper(n+1) <= upper(n).
  double monotone_slack = 1e-12;
};

/// The recorded oscillation of one trajectory. Immutable once built.
class OscillationTrace {
 public:
  OscillationTrace(Vector seed, OrderUnit unit, std::vector<OscillationStep> steps, TraceStatus status);

  const Vector& seed() const noexcept { return seed_; }
  const OrderUnit& unit() const noexcept { return unit_; }
  const std::vector<OscillationStep>& steps() const noexcept { return steps_; }
  TraceStatus status() const noexcept { return status_; }
  bool converged() const noexcept { return status_ == TraceStatus::kConverged; }

  const OscillationStep& initial() const { return steps_.front(); }
  const OscillationStep& final() const { return steps_.back(); }

  /// CSV with header n,M,m,delta.
  void write_csv(std::ostream& out) const;

 private:
  Vector seed_;
  OrderUnit unit_;
  std::vector<OscillationStep> steps_;
  TraceStatus status_;
};

/// upper/lower of a single vector relative to u.
OscillationBounds oscillation_bounds(const OrderUnit& unit, const Vector& v);

/// upper/lower of A^n x, computed by n matrix-vector products.
/// Throws HypothesisViolation when A does not fix u.
OscillationBounds oscillation_step(const PositiveOperator& a, const OrderUnit& unit, const Vector& x,
                                   std::size_t n, double fixed_point_tol = 1e-9);

/// Follows A^n x until the oscillation collapses or the step budget runs out.
/// Throws HypothesisViolation when the monotone nesting breaks.
OscillationTrace trace_until(const PositiveOperator& a, const OrderUnit& unit, const Vector& x,
                             const TraceOptions& options = {});

/// trace_until for every basis vector e_0, ..., e_{d-1}, advanced together as a block.
std::vector<OscillationTrace> trace_basis(const PositiveOperator& a, const OrderUnit& unit,
                                          const TraceOptions& options = {});

/// f0(e_j) = common limit of lower and upper along the trace of e_j. The traces must be
/// the converged basis traces, in order. The result is not renormalized.
Vector limit_functional(const PositiveOperator& a, const OrderUnit& unit,
                        const std::vector<OscillationTrace>& basis_traces);

/// Geometric contraction certificate for the oscillation.
struct RateCertificate {
  std::size_t p = 1;
  double beta = 0.0;
  /// delta(0) of the trajectory the certificate was issued for (0 when issued for A alone).
  double delta0 = 0.0;

  double contraction() const noexcept { return 1.0 - 2.0 * beta; }
  /// (1 - 2 beta)^k * delta0
  double bound(std::size_t k) const { return bound(k, delta0); }
  double bound(std::size_t k, double initial_delta) const;
};

/// beta = min_{i,k} u_k (A^p)_{ik} / u_i, the largest beta with f(A^p y) >= beta for every
/// f in F_u and every y in K with max_j y_j / u_j = 1. Clamped to just below 1/2.
/// Throws HypothesisViolation when A^p has a zero entry or A does not fix u.
RateCertificate certify_rate(const PositiveOperator& a, const OrderUnit& unit, std::size_t p,
                             double fixed_point_tol = 1e-9);

/// As above, with delta0 taken from the seed x.
RateCertificate certify_rate(const PositiveOperator& a, const OrderUnit& unit, std::size_t p,
                             const Vector& x, double fixed_point_tol = 1e-9);

}  // namespace posasym
