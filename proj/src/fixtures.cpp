#include "posasym/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "posasym/errors.hpp"
#include "posasym/format.hpp"

namespace posasym::fixtures {

// ----------------------------------------------------------------- integral operator

double IntegralOperator::node(std::size_t i) const {
  return (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
}

double IntegralOperator::markov_defect() const {
  const auto n = static_cast<Eigen::Index>(grid_size);
  return max_norm(matrix * Vector::Ones(n) - Vector::Ones(n));
}

Matrix IntegralOperator::stochastic_matrix() const {
  const auto n = static_cast<Eigen::Index>(grid_size);
  const double h = 1.0 / static_cast<double>(grid_size);
  auto overlap = [h](double left, double limit) { return std::clamp(limit - left, 0.0, h); };
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double root = std::sqrt(node(static_cast<std::size_t>(i)));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double left = static_cast<double>(j) * h;
      out(i, j) = overlap(left, theta) + overlap(left, root);
    }
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

IntegralOperator build_example1(double theta, std::size_t grid_size) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  if (grid_size < 8) throw DomainError("grid size must be at least 8");

  IntegralOperator op;
  op.theta = theta;
  op.grid_size = grid_size;
  const auto n = static_cast<Eigen::Index>(grid_size);
  const double h = 1.0 / static_cast<double>(grid_size);
  op.matrix = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double root = std::sqrt(op.node(static_cast<std::size_t>(i)));
    const double phi = 1.0 / (theta + root);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double right = static_cast<double>(j + 1) * h;
      const int cells = (right <= theta ? 1 : 0) + (right <= root ? 1 : 0);
      op.matrix(i, j) = phi * h * cells;
    }
  }
  return op;
}

std::size_t example1_analytic_index(double theta, double p) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("p must lie in [0, 1)");
  for (std::size_t m = 1; m <= 64; ++m) {
    if (p < std::pow(theta, std::ldexp(1.0, -static_cast<int>(m - 1)))) return m;
  }
  throw DomainError("p too close to 1 for a representable index");
}

std::size_t example1_positivity_index(const IntegralOperator& op, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("p must lie in [0, 1)");
  const double h = 1.0 / static_cast<double>(op.grid_size);
  for (int k = 0; k < 64; ++k) {
    const double threshold = std::pow(op.theta, std::ldexp(1.0, -k));
    if (std::abs(p - threshold) < 2.0 * h) {
      throw DomainError("indeterminate at this resolution: p = " + format_real(p) + " is within two cells of " +
                        format_real(threshold));
    }
    if (threshold > p + 2.0 * h) break;
  }

  const auto n = static_cast<Eigen::Index>(op.grid_size);
  Vector x = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = op.node(static_cast<std::size_t>(j));
    if (t > p) x(j) = t - p;
  }
  if (!(x.maxCoeff() > 0.0)) throw DomainError("p leaves no grid node in the support");

  for (std::size_t m = 1; m <= op.grid_size; ++m) {
    x = op.matrix * x;
    x /= x.maxCoeff();
    if (x.minCoeff() > 0.0) return m;
  }
  throw HypothesisViolation("discretized operator never makes the test function positive");
}

// ------------------------------------------------------------- stochastic sequences

StochasticSequenceOperator build_example2(std::size_t n) {
  if (n < 3) throw DomainError("truncation size must be at least 3");
  StochasticSequenceOperator op;
  op.size = n;
  const auto d = static_cast<Eigen::Index>(n);
  op.matrix = Matrix::Zero(d, d);
  for (Eigen::Index row = 0; row < d; ++row) {
    const int k = static_cast<int>(row) + 1;  // one-based row
    for (int c = 1; c <= k; ++c) op.matrix(row, c - 1) = std::ldexp(1.0, -c);
    // Column k + 1 carries 2^-k; in the last row it folds into column N.
    const Eigen::Index tail = std::min<Eigen::Index>(k, d - 1);
    op.matrix(row, tail) += std::ldexp(1.0, -k);
  }
  return op;
}

double example2_closed_form(std::size_t n) {
  if (n == 0) throw DomainError("coordinates are one-based");
  const auto c = [](std::size_t k) {
    return std::ldexp(1.0, -static_cast<int>((k - 1) * k / 2));
  };
  return c(n) - c(n + 1);
}

LimitDistributionReport example2_limit_distribution(const StochasticSequenceOperator& op, double tol) {
  LimitDistributionReport report;
  report.decomp = limit_decomposition(PositiveOperator(op.matrix));
  if (report.decomp.is_zero_limit) throw HypothesisViolation("stochastic matrix produced a zero limit");
  report.computed = *report.decomp.f0;
  const auto d = static_cast<Eigen::Index>(op.size);
  report.closed_form = Vector(d);
  for (Eigen::Index i = 0; i < d; ++i) report.closed_form(i) = example2_closed_form(static_cast<std::size_t>(i) + 1);
  report.compared = std::min<std::size_t>(10, op.size - 1);
  const auto m = static_cast<Eigen::Index>(report.compared);
  report.max_error = (report.computed.head(m) - report.closed_form.head(m)).cwiseAbs().maxCoeff();
  if (report.max_error > tol) {
    throw HypothesisViolation("limit distribution differs from c_n - c_{n+1} by " + format_real(report.max_error));
  }
  return report;
}

EventualPositivityReport example2_eventual_positivity(const StochasticSequenceOperator& op, std::size_t n) {
  if (n < 1 || n + 2 > op.size - 1) {
    throw DomainError("need 1 <= n and n + 2 <= N - 1 (N = " + std::to_string(op.size) + ")");
  }
  const PositiveOperator a(op.matrix);
  EventualPositivityReport report;
  report.n = n;

  Vector v = basis_vector(op.size, n + 1);  // e_{n+2}
  for (std::size_t k = 0; k < n; ++k) v = op.matrix * v;
  report.first_coordinate = v(0);
  v = op.matrix * v;
  report.next_power_interior = in_interior(a.space(), v);
  v = op.matrix * v;
  report.second_next_power_interior = in_interior(a.space(), v);

  report.index_grows_with_basis = true;
  for (std::size_t j = 1; j + 1 <= op.size; ++j) {
    const auto idx = find_positivity_index(a, basis_vector(op.size, j - 1));
    const std::size_t expected = std::max<std::size_t>(1, j - 1);
    report.basis_indices.push_back(idx.value_or(0));
    if (!idx || *idx != expected) report.index_grows_with_basis = false;
  }

  if (report.first_coordinate != 0.0 || !report.next_power_interior || !report.second_next_power_interior) {
    throw HypothesisViolation("eventual positivity pattern broken at n = " + std::to_string(n));
  }
  return report;
}

// ---------------------------------------------------------------------- kernel walk

KernelWalk::KernelWalk(std::vector<double> grid, Matrix p) : grid_(std::move(grid)), p_(std::move(p)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (n == 0) throw DomainError("kernel walk needs at least one state");
  if (p_.rows() != n) throw DimensionError(grid_.size(), p_.rows());
  if (p_.cols() != n) throw DimensionError(grid_.size(), p_.cols());
  for (Eigen::Index s = 0; s < n; ++s) {
    if (!p_.row(s).allFinite() || p_.row(s).minCoeff() < 0.0) {
      throw DomainError("kernel row " + std::to_string(s + 1) + " has negative entries");
    }
    if (std::abs(p_.row(s).sum() - 1.0) > 1e-12) {
      throw DomainError("kernel row " + std::to_string(s + 1) + " is not a probability vector");
    }
  }
}

KernelWalk KernelWalk::gaussian(std::size_t n, double width) {
  if (n < 2) throw DomainError("gaussian walk needs at least two states");
  if (!(width > 0.0)) throw DomainError("kernel width must be positive");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  const auto d = static_cast<Eigen::Index>(n);
  Matrix p(d, d);
  for (Eigen::Index s = 0; s < d; ++s) {
    for (Eigen::Index t = 0; t < d; ++t) {
      const double z = (grid[static_cast<std::size_t>(t)] - grid[static_cast<std::size_t>(s)]) / width;
      p(s, t) = std::exp(-0.5 * z * z);
    }
    p.row(s) /= p.row(s).sum();
  }
  return KernelWalk(std::move(grid), std::move(p));
}

KernelWalkConvergence kernel_walk_convergence(const KernelWalk& walk, double eps, std::size_t max_steps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const PositiveOperator a(walk.kernel());

  // Row s of P^n is (P^T)^n e_s: every state must eventually charge every state.
  const PositiveOperator adjoint(Matrix(walk.kernel().transpose()));
  for (std::size_t s = 0; s < walk.size(); ++s) {
    if (!find_positivity_index(adjoint, basis_vector(walk.size(), s))) {
      throw RegularityError(s, "the walk from this state never charges every state");
    }
  }

  const LimitDecomposition decomp = limit_decomposition(a);
  if (decomp.is_zero_limit) throw HypothesisViolation("kernel walk powers vanish; the kernel is not stochastic");
  KernelWalkConvergence out;
  out.p0 = *decomp.f0;
  Matrix power = walk.kernel();
  for (std::size_t n = 1; n <= max_steps; ++n) {
    const Matrix diff = power.rowwise() - out.p0.transpose();
    out.trace.push_back(diff.cwiseAbs().rowwise().sum().maxCoeff());
    out.adjoint_norms.push_back(operator_norm(power - decomp.A0));
    if (out.trace.back() <= eps) {
      out.n_star = n;
      return out;
    }
    power = power * walk.kernel();
  }
  throw ConvergenceError("kernel walk did not reach " + format_real(eps) + " within " + std::to_string(max_steps) +
                         " steps");
}

}  // namespace posasym::fixtures
