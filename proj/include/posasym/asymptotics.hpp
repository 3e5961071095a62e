#pragma once

// Long-run behaviour of the iterates A^n of a positive operator on the orthant.
//
// Under the regularity condition (every nonzero x in K reaches Int(K) after some power)
// and power boundedness, A^n converges in norm to either 0 or the rank-one projection
// A0 = f0 (x) u, where u is an interior fixed point of A and f0 is the unique fixed point
// of the adjoint normalized by f0(u) = 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "posasym/linalg.hpp"
#include "posasym/ordered_space.hpp"
#include "posasym/oscillation.hpp"
#include "posasym/positive_operator.hpp"

namespace posasym {

/// dim^2 + 1, above Wielandt's bound (d-1)^2 + 1 on the index of primitivity.
std::size_t default_index_cap(std::size_t dim);

/// Smallest n in [1, cap] with A^n x in Int(K), or nullopt.
/// Throws DomainError unless x is a nonzero element of K.
std::optional<std::size_t> find_positivity_index(const PositiveOperator& a, const Vector& x,
                                                 std::optional<std::size_t> cap = std::nullopt);

/// find_positivity_index for each basis vector.
std::vector<std::optional<std::size_t>> basis_positivity_indices(const PositiveOperator& a,
                                                                 std::optional<std::size_t> cap = std::nullopt);

/// Smallest p in [1, cap] such that every column of A^p is interior, or nullopt.
std::optional<std::size_t> find_uniform_index(const PositiveOperator& a,
                                              std::optional<std::size_t> cap = std::nullopt);

struct PerronEstimate {
  /// Collatz-Wielandt bounds min_i (Av)_i / v_i <= rho <= max_i (Av)_i / v_i.
  double lower = 0.0;
  double upper = 0.0;
  Vector vector;

  double value() const noexcept { return 0.5 * (lower + upper); }
};

/// Perron root and vector of a regular operator, by normalized repeated squaring.
PerronEstimate perron_estimate(const PositiveOperator& a);

struct LimitOptions {
  std::optional<std::size_t> cap;
  double fixed_point_tol = 1e-9;
  /// A^n is declared zero once its norm drops below this and is still decreasing.
  double zero_tol = 1e-12;
  /// Powers are declared divergent above this norm.
  double divergence_threshold = 1e12;
  /// Squaring stops once ||B^2 - B|| <= max(stationary_tol, 4 n d eps) * ||B|| for B = A^n.
  double stationary_tol = 1e-13;
  std::size_t max_squarings = 60;
  /// ||A^N - A0|| above this for the final sampled N is a hypothesis breach.
  double verify_tol = 1e-8;
  TraceOptions trace{.eps = 1e-14, .delta_floor = 1e-14, .max_steps = 1000000};
};

struct PowerSample {
  std::uint64_t n = 0;
  double norm = 0.0;
};

struct LimitDecomposition {
  bool is_zero_limit = false;
  std::optional<Vector> u;
  std::optional<Vector> f0;
  Matrix A0;
  std::optional<RateCertificate> certificate;

  std::vector<std::size_t> positivity_indices;
  std::optional<std::size_t> uniform_index;
  /// ||A^n|| at the sampled checkpoints n = p, 2p, 4p, ...
  std::vector<PowerSample> power_samples;
  /// ||A^N - A0|| at the last checkpoint.
  double power_residual = 0.0;
  /// Longest basis trace, in steps.
  std::size_t trace_steps = 0;

  OrderUnit unit() const;
};

/// Computes the limit of A^n. Throws RegularityError, or HypothesisViolation when the
/// powers diverge or the Perron root differs from 1.
LimitDecomposition limit_decomposition(const PositiveOperator& a, const LimitOptions& options = {});

struct SimpleEigenvalueReport {
  std::size_t nullity = 0;
  std::size_t adjoint_nullity = 0;
  /// max over kernel basis vectors v of ||v - f0(v) u|| / ||v||
  double fixed_residual = 0.0;
  /// max over adjoint kernel vectors w of ||w - w(u) f0|| / ||w||
  double adjoint_residual = 0.0;
};

/// Checks that 1 is a simple eigenvalue with eigenvector u and adjoint eigenvector f0.
/// Throws HypothesisViolation when the kernel of A - I has dimension above 1.
SimpleEigenvalueReport check_simple_eigenvalue(const PositiveOperator& a, const LimitDecomposition& decomp,
                                               double rank_tol = 1e-10);

struct ProjectionIdentities {
  std::size_t n = 1;
  double idempotence = 0.0;         // ||A0^2 - A0||
  double left_absorption = 0.0;     // ||A A0 - A0||
  double right_absorption = 0.0;    // ||A0 A - A0||
  double power_identity = 0.0;      // ||(A - A0)^n - (A^n - A0)||

  double max() const noexcept;
};

ProjectionIdentities check_projection_identities(const PositiveOperator& a, const LimitDecomposition& decomp,
                                                 std::size_t n);

struct FundamentalOptions {
  double eps = 1e-10;
  /// Term norms must shrink across every window of window_periods * p terms.
  std::size_t window_periods = 8;
  std::size_t max_terms = 1000000;
};

struct FundamentalInverse {
  Matrix inverse;
  std::size_t terms = 0;
  double last_term_norm = 0.0;
  /// max(||T T^-1 - I||, ||T^-1 T - I||) with T = I - A + A0.
  double residual = 0.0;
};

/// (I - A + A0)^{-1} = I + sum_{n>=1} (A^n - A0), summed until ||A^N - A0|| < eps.
/// Throws ConvergenceError when the terms stop shrinking.
FundamentalInverse fundamental_inverse(const PositiveOperator& a, const LimitDecomposition& decomp,
                                       const FundamentalOptions& options = {});

}  // namespace posasym
