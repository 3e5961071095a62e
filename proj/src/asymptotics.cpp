#include "posasym/asymptotics.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "posasym/errors.hpp"
#include "posasym/format.hpp"

namespace posasym {

namespace {

std::vector<bool> support(const Vector& v) {
  std::vector<bool> s(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) s[static_cast<std::size_t>(i)] = v(i) > 0.0;
  return s;
}

bool full(const std::vector<bool>& s) { return std::all_of(s.begin(), s.end(), [](bool b) { return b; }); }

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

}  // namespace

std::size_t default_index_cap(std::size_t dim) { return dim * dim + 1; }

std::optional<std::size_t> find_positivity_index(const PositiveOperator& a, const Vector& x,
                                                 std::optional<std::size_t> cap) {
  if (!in_cone(a.space(), x)) throw DomainError("positivity index needs x in the cone");
  if (x.maxCoeff() <= 0.0) throw DomainError("positivity index needs x != 0");
  const std::size_t limit = cap.value_or(default_index_cap(a.dim()));

  // The support of A v is determined by the support of v, so once a non-full support
  // repeats the orbit cycles without ever becoming interior.
  std::unordered_set<std::vector<bool>> seen;
  Vector v = x / x.maxCoeff();
  for (std::size_t n = 1; n <= limit; ++n) {
    v = a.matrix() * v;
    const double top = v.maxCoeff();
    if (!(top > 0.0)) return std::nullopt;
    v /= top;
    if (in_interior(a.space(), v)) return n;
    auto s = support(v);
    if (!full(s) && !seen.insert(std::move(s)).second) return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::optional<std::size_t>> basis_positivity_indices(const PositiveOperator& a,
                                                                 std::optional<std::size_t> cap) {
  std::vector<std::optional<std::size_t>> out;
  out.reserve(a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) out.push_back(find_positivity_index(a, basis_vector(a.dim(), j), cap));
  return out;
}

std::optional<std::size_t> find_uniform_index(const PositiveOperator& a, std::optional<std::size_t> cap) {
  const std::size_t limit = cap.value_or(default_index_cap(a.dim()));
  // A zero row stays zero in every power.
  if ((a.matrix().rowwise().maxCoeff().array() <= 0.0).any()) return std::nullopt;

  // Without zero rows an interior column stays interior, so the uniform index is the
  // largest per-column index (exact when interior_tol = 0; verified below otherwise).
  std::size_t candidate = 1;
  for (const auto& idx : basis_positivity_indices(a, limit)) {
    if (!idx) return std::nullopt;
    candidate = std::max(candidate, *idx);
  }
  auto columns_interior = [&](const Matrix& p) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (!in_interior(a.space(), p.col(j))) return false;
    }
    return true;
  };
  Matrix power = matrix_power(a.matrix(), candidate);
  for (std::size_t p = candidate; p <= limit; ++p) {
    if (columns_interior(power)) return p;
    power = power * a.matrix();
    power /= std::max(max_abs_entry(power), std::numeric_limits<double>::min());
  }
  return std::nullopt;
}

PerronEstimate perron_estimate(const PositiveOperator& a) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  Matrix b = a.matrix();
  Vector v = Vector::Ones(d);
  for (int k = 0; k < 64; ++k) {
    const double scale = max_abs_entry(b);
    if (!(scale > 0.0)) break;
    b /= scale;
    Vector next = b * Vector::Ones(d);
    const double top = next.maxCoeff();
    if (!(top > 0.0)) break;
    next /= top;
    const bool settled = (next - v).cwiseAbs().maxCoeff() <= 1e-15;
    v = next;
    if (settled) break;
    b = b * b;
  }
  // Polish with plain power steps.
  for (int k = 0; k < 8; ++k) {
    Vector next = a.matrix() * v;
    const double top = next.maxCoeff();
    if (!(top > 0.0)) break;
    v = next / top;
  }
  PerronEstimate est;
  const Vector av = a.matrix() * v;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (v(i) > 0.0) {
      lo = std::min(lo, av(i) / v(i));
      hi = std::max(hi, av(i) / v(i));
    }
  }
  est.lower = std::isfinite(lo) ? lo : 0.0;
  est.upper = hi;
  est.vector = v;
  return est;
}

OrderUnit LimitDecomposition::unit() const {
  if (is_zero_limit || !u) throw DomainError("zero limit has no order unit");
  return OrderUnit(ConeSpace(static_cast<std::size_t>(u->size())), *u);
}

LimitDecomposition limit_decomposition(const PositiveOperator& a, const LimitOptions& options) {
  const std::size_t dim = a.dim();
  const auto d = static_cast<Eigen::Index>(dim);
  const std::size_t cap = options.cap.value_or(default_index_cap(dim));
  LimitDecomposition out;

  // Regularity on the basis of K.
  const auto indices = basis_positivity_indices(a, cap);
  std::size_t p = 1;
  for (std::size_t j = 0; j < dim; ++j) {
    if (!indices[j]) {
      throw RegularityError(j, "A^n e_" + std::to_string(j + 1) + " stays on the boundary for n <= " +
                                   std::to_string(cap));
    }
    out.positivity_indices.push_back(*indices[j]);
    p = std::max(p, *indices[j]);
  }
  out.uniform_index = find_uniform_index(a, cap);

  // Checkpoints n = p 2^k by repeated squaring.
  Matrix power = matrix_power(a.matrix(), p);
  std::uint64_t n = p;
  bool stationary = false;
  for (std::size_t k = 0; k <= options.max_squarings; ++k) {
    const double norm = operator_norm(power);
    if (!std::isfinite(norm) || norm > options.divergence_threshold) {
      throw HypothesisViolation("power norms diverge: ||A^" + std::to_string(n) + "|| = " + format_real(norm) +
                                ", Perron root ~ " + format_real(perron_estimate(a).value()));
    }
    const bool decreasing = out.power_samples.empty() || norm < out.power_samples.back().norm;
    out.power_samples.push_back({n, norm});
    if (norm < options.zero_tol && decreasing) {
      out.is_zero_limit = true;
      out.A0 = Matrix::Zero(d, d);
      out.power_residual = norm;
      return out;
    }
    Matrix next = power * power;
    const double change = operator_norm(next - power);
    // Rounding in an n-fold product of d x d matrices grows like n d eps.
    const double roundoff = 4.0 * static_cast<double>(n) * static_cast<double>(dim) *
                            std::numeric_limits<double>::epsilon();
    power = std::move(next);
    n = saturating_mul(n, 2);
    if (change <= std::max(options.stationary_tol, roundoff) * norm) {
      stationary = true;
      break;
    }
  }
  if (!stationary) {
    throw HypothesisViolation("powers neither converge nor decay after " + std::to_string(options.max_squarings) +
                              " squarings; Perron root ~ " + format_real(perron_estimate(a).value()));
  }

  // The stationary power is the rank-one limit; its range is spanned by u.
  Vector u = power * Vector::Ones(d);
  if (!(u.maxCoeff() > 0.0)) throw HypothesisViolation("limit of the powers has no interior range");
  u /= u.maxCoeff();
  for (int k = 0; k < 4; ++k) {
    Vector next = a.matrix() * u;
    u = next / next.maxCoeff();
  }
  if (!in_interior(a.space(), u) || !(u.minCoeff() > 0.0)) {
    throw HypothesisViolation("fixed vector of the limit is not interior");
  }
  const OrderUnit unit(a.space(), u);
  if (!fixes_unit(a, unit, options.fixed_point_tol)) {
    const PerronEstimate est = perron_estimate(a);
    throw HypothesisViolation("dominant eigenvalue differs from 1: Perron root in [" + format_real(est.lower) +
                              ", " + format_real(est.upper) + "]");
  }

  TraceOptions trace_options = options.trace;
  trace_options.fixed_point_tol = options.fixed_point_tol;
  const auto traces = trace_basis(a, unit, trace_options);
  Vector f0 = limit_functional(a, unit, traces);
  f0 /= f0.dot(u);
  for (const auto& t : traces) out.trace_steps = std::max(out.trace_steps, t.final().n);

  out.A0 = u * f0.transpose();
  out.power_residual = operator_norm(power - out.A0);
  out.power_samples.push_back({n, operator_norm(power)});
  if (out.power_residual > options.verify_tol) {
    throw HypothesisViolation("||A^" + std::to_string(n) + " - A0|| = " + format_real(out.power_residual) +
                              " exceeds " + format_real(options.verify_tol));
  }
  if (out.uniform_index) out.certificate = certify_rate(a, unit, *out.uniform_index, options.fixed_point_tol);
  out.u = std::move(u);
  out.f0 = std::move(f0);
  return out;
}

SimpleEigenvalueReport check_simple_eigenvalue(const PositiveOperator& a, const LimitDecomposition& decomp,
                                               double rank_tol) {
  if (decomp.is_zero_limit || !decomp.u || !decomp.f0) {
    throw DomainError("simple-eigenvalue check needs a nonzero limit");
  }
  const auto d = static_cast<Eigen::Index>(a.dim());
  const Vector& u = *decomp.u;
  const Vector& f0 = *decomp.f0;
  const Matrix identity = Matrix::Identity(d, d);

  SimpleEigenvalueReport report;
  Eigen::FullPivLU<Matrix> lu(a.matrix() - identity);
  lu.setThreshold(rank_tol);
  report.nullity = static_cast<std::size_t>(lu.dimensionOfKernel());
  Eigen::FullPivLU<Matrix> adjoint_lu(a.matrix().transpose() - identity);
  adjoint_lu.setThreshold(rank_tol);
  report.adjoint_nullity = static_cast<std::size_t>(adjoint_lu.dimensionOfKernel());
  if (report.nullity > 1 || report.adjoint_nullity > 1) {
    throw HypothesisViolation("eigenvalue 1 is not simple: nullity of A - I is " + std::to_string(report.nullity));
  }
  if (report.nullity == 1) {
    const Vector v = lu.kernel().col(0);
    report.fixed_residual = max_norm(v - f0.dot(v) * u) / max_norm(v);
  }
  if (report.adjoint_nullity == 1) {
    const Vector w = adjoint_lu.kernel().col(0);
    report.adjoint_residual = max_norm(w - w.dot(u) * f0) / max_norm(w);
  }
  return report;
}

double ProjectionIdentities::max() const noexcept {
  return std::max({idempotence, left_absorption, right_absorption, power_identity});
}

ProjectionIdentities check_projection_identities(const PositiveOperator& a, const LimitDecomposition& decomp,
                                                 std::size_t n) {
  if (n == 0) throw DomainError("power identity needs n >= 1");
  a.space().check(decomp.A0);
  const Matrix& a0 = decomp.A0;
  const Matrix& m = a.matrix();
  ProjectionIdentities r;
  r.n = n;
  r.idempotence = operator_norm(a0 * a0 - a0);
  r.left_absorption = operator_norm(m * a0 - a0);
  r.right_absorption = operator_norm(a0 * m - a0);
  r.power_identity = operator_norm(matrix_power(m - a0, n) - (matrix_power(m, n) - a0));
  return r;
}

FundamentalInverse fundamental_inverse(const PositiveOperator& a, const LimitDecomposition& decomp,
                                       const FundamentalOptions& options) {
  a.space().check(decomp.A0);
  const auto d = static_cast<Eigen::Index>(a.dim());
  const Matrix& a0 = decomp.A0;
  const Matrix identity = Matrix::Identity(d, d);
  const std::size_t period =
      decomp.certificate ? decomp.certificate->p : decomp.uniform_index.value_or(1);
  const std::size_t window = std::max<std::size_t>(1, period) * std::max<std::size_t>(1, options.window_periods);

  FundamentalInverse out;
  Matrix sum = identity;
  Matrix power = identity;
  std::vector<double> norms;
  for (std::size_t n = 1;; ++n) {
    power = power * a.matrix();
    const Matrix term = power - a0;
    const double norm = operator_norm(term);
    norms.push_back(norm);
    sum += term;
    out.terms = n;
    out.last_term_norm = norm;
    if (norm < options.eps) break;
    if (!std::isfinite(norm)) throw ConvergenceError("fundamental series terms overflow at n = " + std::to_string(n));
    if (n >= 2 * window && norm >= norms[n - 1 - window]) {
      throw ConvergenceError("fundamental series terms stopped shrinking: ||A^" + std::to_string(n) +
                             " - A0|| = " + format_real(norm) + " >= ||A^" + std::to_string(n - window) +
                             " - A0|| = " + format_real(norms[n - 1 - window]));
    }
    if (n >= options.max_terms) {
      throw ConvergenceError("fundamental series did not reach " + format_real(options.eps) + " within " +
                             std::to_string(options.max_terms) + " terms");
    }
  }
  out.inverse = std::move(sum);
  const Matrix t = identity - a.matrix() + a0;
  out.residual = std::max(operator_norm(t * out.inverse - identity), operator_norm(out.inverse * t - identity));
  return out;
}

}  // namespace posasym
