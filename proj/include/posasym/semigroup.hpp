#pragma once

// Positive one-parameter semigroups S_t = exp(tG) generated by Metzler matrices G
// (nonnegative off-diagonal entries). The long-run limit is read off the skeleton
// operator A = S_tau, and the distance ||S_t - A0|| is bounded through the oscillation of
// the trajectories that start in Q+ = S_tau(B+), B+ the positive part of the unit ball.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "posasym/asymptotics.hpp"
#include "posasym/linalg.hpp"
#include "posasym/ordered_space.hpp"

namespace posasym {

class Generator {
 public:
  /// Throws DomainError on a negative off-diagonal entry, or on a row sum away from zero
  /// when row_sum_zero is requested.
  Generator(ConeSpace space, Matrix g, bool row_sum_zero = false);
  explicit Generator(const Matrix& g, bool row_sum_zero = false);

  const ConeSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return g_; }
  std::size_t dim() const noexcept { return space_.dim(); }
  bool row_sum_zero() const noexcept { return row_sum_zero_; }

 private:
  ConeSpace space_;
  Matrix g_;
  bool row_sum_zero_;
};

struct Exponential {
  Matrix value;
  std::size_t squarings = 0;
  /// Most negative entry before clamping (0 when none).
  double most_negative = 0.0;
  /// Entries below -1e-13 were clamped to 0.
  bool clamped = false;
};

/// exp(tG) by scaling and squaring of a truncated Taylor series. Throws DomainError
/// for t < 0 and HypothesisViolation on overflow.
Exponential exponential(const Generator& gen, double t);

/// exp(tG); see exponential().
Matrix evaluate(const Generator& gen, double t);

struct BoundSample {
  double t = 0.0;
  double bound = 0.0;
  double actual = 0.0;
};

struct NormSample {
  double t = 0.0;
  double norm = 0.0;
};

struct BoundOptions {
  /// Random positive unit vectors added to the sample of B+.
  std::size_t random_samples = 32;
  std::uint64_t seed = 20240917;
  /// All 0/1 vertices of B+ are enumerated up to this dimension; the bound is then exact.
  std::size_t exhaustive_dim = 12;
};

struct SemigroupOptions {
  LimitOptions limit;
  BoundOptions bound;
  /// Grid t = tau 2^k stops once the bound is below this or k reaches max_doublings.
  double bound_floor = 1e-12;
  std::size_t max_doublings = 40;
  /// ||S_t|| may exceed ||S_tau|| by at most this factor on the grid.
  double growth_factor = 1e6;
  /// Tolerance for f0 G = 0 in the Markov case.
  double stationarity_tol = 1e-10;
};

struct SemigroupLimit {
  LimitDecomposition decomp;
  double tau = 1.0;
  std::vector<BoundSample> bound_trace;
  /// ||S_t|| on the grid t = tau 2^k.
  std::vector<NormSample> norm_samples;
  /// max over the grid of ||S_t A0 - A0|| and ||A0 S_t - A0||.
  double absorption_residual = 0.0;
  /// ||f0^T G|| when the generator has zero row sums.
  double stationarity_residual = 0.0;
  /// True when the sup over Q+ was taken over every vertex of B+.
  bool exhaustive = false;

  void write_bound_csv(std::ostream& out) const;
};

/// Long-run limit of exp(tG) via the skeleton A = exp(tau G).
SemigroupLimit semigroup_limit(const Generator& gen, double tau, double horizon,
                               const SemigroupOptions& options = {});

/// The sample Y of Q+ used by oscillation_bound: exp(tau G) applied to the vertices of B+
/// (all of them when dim <= exhaustive_dim, otherwise the basis vectors) and to seeded
/// random positive unit vectors. One column per sample.
Matrix bound_sample(const Generator& gen, double tau, const BoundOptions& options);

/// 2 gamma C_u max_{y in Y} (M_y(t - tau) - m_y(t - tau)). Throws DomainError for t <= tau
/// or a zero limit.
double oscillation_bound(const Generator& gen, const SemigroupLimit& lim, double t, double tau,
                         const BoundOptions& options = {});

}  // namespace posasym
