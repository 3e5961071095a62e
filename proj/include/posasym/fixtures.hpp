#pragma once

// Regression fixtures: two Markov operators that are regular (every nonzero x in K
// reaches the interior after its own power) although no single power is strongly
// positive, and a discretized random walk driven by a stochastic kernel.

#include <cstddef>
#include <optional>
#include <vector>

#include "posasym/asymptotics.hpp"
#include "posasym/linalg.hpp"

namespace posasym::fixtures {

// ---------------------------------------------------------------------------
// Integral operator on C([0,1])
//   (Ax)(s) = phi(s) (int_0^theta x + int_0^sqrt(s) x),   phi(s) = 1 / (theta + sqrt(s))
// ---------------------------------------------------------------------------

/// Discretization on the uniform midpoint grid s_i = (i + 1/2) / n. Each integral
/// int_0^a x is the composite midpoint sum over the cells [j/n, (j+1)/n] that lie in
/// [0, a]. Entries that vanish for the integral operator are exactly zero here.
struct IntegralOperator {
  double theta = 0.25;
  std::size_t grid_size = 0;
  Matrix matrix;

  /// Midpoint of cell i.
  double node(std::size_t i) const;
  /// ||A 1 - 1||_inf, the quadrature defect of the Markov identity A 1 = 1.
  double markov_defect() const;
  /// Same grid, but cell j gets the exact length of [j/n, (j+1)/n] inside [0, theta] and
  /// inside [0, sqrt(s_i)]. Rows sum to 1 and every cell touching [0, a] is charged, so
  /// this is the matrix the limit pipeline runs on.
  Matrix stochastic_matrix() const;
};

/// Throws DomainError unless 0 < theta < 1 and grid_size >= 8.
IntegralOperator build_example1(double theta, std::size_t grid_size);

/// First power m with A^m x strictly positive at every node, for x supported on (p, 1].
/// Throws DomainError when p lies within two cells of a threshold theta^(1/2^k), where the
/// grid cannot resolve the index.
std::size_t example1_positivity_index(const IntegralOperator& op, double p);

/// The index predicted for the integral operator itself: the zero set [0, p] of x maps to
/// [0, p^2] while p >= theta, and A x > 0 once p < theta, so m is the smallest m >= 1 with
/// p < theta^(1/2^(m-1)).
std::size_t example1_analytic_index(double theta, double p);

// ---------------------------------------------------------------------------
// Stochastic matrix on c: row k = (1/2, 1/4, ..., 2^-k, 2^-k, 0, ...)
// ---------------------------------------------------------------------------

struct StochasticSequenceOperator {
  std::size_t size = 0;
  Matrix matrix;
};

/// N x N truncation. The tail of the last row is folded into its last column so every
/// row sums to exactly 1. Throws DomainError for N < 3.
StochasticSequenceOperator build_example2(std::size_t n);

/// c_n - c_{n+1} with c_n = 2^{-(n-1)n/2}, n = 1, 2, ... (one-based).
double example2_closed_form(std::size_t n);

struct LimitDistributionReport {
  Vector computed;
  Vector closed_form;
  /// Coordinates compared (one-based n <= compared).
  std::size_t compared = 0;
  double max_error = 0.0;
  LimitDecomposition decomp;
};

/// f0 from limit_decomposition, compared with the closed form on coordinates
/// n <= min(10, N - 1). Throws HypothesisViolation beyond tol.
LimitDistributionReport example2_limit_distribution(const StochasticSequenceOperator& op, double tol = 1e-8);

struct EventualPositivityReport {
  std::size_t n = 0;
  /// First coordinate of A^n e_{n+2}.
  double first_coordinate = 0.0;
  bool next_power_interior = false;       // A^{n+1} e_{n+2} >> 0
  bool second_next_power_interior = false;  // A^{n+2} e_{n+2} >> 0
  /// One-based basis indices j = 1..N-1 and the first power taking e_j inside.
  std::vector<std::size_t> basis_indices;
  /// basis_indices[j] = max(1, j - 1) for every j: the required power grows without bound
  /// along the basis, so no common power serves the whole cone.
  bool index_grows_with_basis = false;
};

/// Checks A^n e_{n+2} has first coordinate 0 while A^{n+1} e_{n+2} is interior.
/// Requires n >= 1 and n + 2 <= N - 1. Throws HypothesisViolation when the pattern breaks.
EventualPositivityReport example2_eventual_positivity(const StochasticSequenceOperator& op, std::size_t n);

// ---------------------------------------------------------------------------
// Random walk on a finite grid of a compact state space
// ---------------------------------------------------------------------------

class KernelWalk {
 public:
  /// Rows of p are the transition laws P_s. Throws DomainError unless p is row-stochastic.
  KernelWalk(std::vector<double> grid, Matrix p);

  /// Walk on n equispaced states of [0,1] with P_s proportional to exp(-(t-s)^2 / (2 width^2)).
  static KernelWalk gaussian(std::size_t n, double width);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const Matrix& kernel() const noexcept { return p_; }
  std::size_t size() const noexcept { return grid_.size(); }

 private:
  std::vector<double> grid_;
  Matrix p_;
};

struct KernelWalkConvergence {
  std::size_t n_star = 0;
  /// trace[n-1] = max_s ||P_s^(n) - P0||, the total variation norm sum_t |.|.
  std::vector<double> trace;
  /// trace[n-1] <= ||(A^*)^n - A0^*|| for each recorded n, as computed.
  std::vector<double> adjoint_norms;
  Vector p0;
};

/// Iterates the kernel until the worst row is within eps of the limit measure.
/// Throws RegularityError when some state never charges every state, ConvergenceError
/// when eps is not reached within max_steps.
KernelWalkConvergence kernel_walk_convergence(const KernelWalk& walk, double eps, std::size_t max_steps = 100000);

}  // namespace posasym::fixtures
