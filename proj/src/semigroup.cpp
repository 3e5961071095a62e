#include "posasym/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "posasym/errors.hpp"
#include "posasym/format.hpp"

namespace posasym {

namespace {

constexpr double kNegativeClamp = -1e-13;
constexpr double kSeriesTol = 1e-17;
constexpr std::size_t kMaxSquarings = 2048;

// sup over the sample of M_y - m_y for the columns of z, relative to u.
double max_oscillation(const Matrix& z, const Vector& u) {
  const Matrix scaled = u.cwiseInverse().asDiagonal() * z;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
    worst = std::max(worst, scaled.col(j).maxCoeff() - scaled.col(j).minCoeff());
  }
  return worst;
}

double bound_from_sample(const Generator& gen, const OrderUnit& unit, const Matrix& sample, double t,
                         double tau) {
  const Matrix z = evaluate(gen, t - tau) * sample;
  return 2.0 * unit.gamma() * unit.norm_constant() * max_oscillation(z, unit.u());
}

}  // namespace

Generator::Generator(ConeSpace space, Matrix g, bool row_sum_zero)
    : space_(space), g_(std::move(g)), row_sum_zero_(row_sum_zero) {
  space_.check(g_);
  if (!g_.allFinite()) throw DomainError("generator has non-finite entries");
  for (Eigen::Index i = 0; i < g_.rows(); ++i) {
    for (Eigen::Index j = 0; j < g_.cols(); ++j) {
      if (i != j && g_(i, j) < 0.0) {
        throw DomainError("generator is not Metzler: off-diagonal entry (" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ") = " + format_real(g_(i, j)));
      }
    }
    if (row_sum_zero_) {
      const double sum = g_.row(i).sum();
      const double scale = std::max(1.0, g_.row(i).cwiseAbs().maxCoeff());
      if (std::abs(sum) > 1e-12 * scale) {
        throw DomainError("generator row " + std::to_string(i + 1) + " sums to " + format_real(sum) + ", not 0");
      }
    }
  }
}

Generator::Generator(const Matrix& g, bool row_sum_zero)
    : Generator(ConeSpace(static_cast<std::size_t>(g.rows())), g, row_sum_zero) {}

Exponential exponential(const Generator& gen, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("semigroup time must be finite and nonnegative");
  const auto d = static_cast<Eigen::Index>(gen.dim());
  const Matrix& g = gen.matrix();

  // exp(tG) = exp(-tc) exp(t(G + cI)) with G + cI >= 0, so every series term is nonnegative.
  const double shift = std::max(0.0, -g.diagonal().minCoeff());
  const Matrix shifted = g + shift * Matrix::Identity(d, d);

  Exponential out;
  double scaled_t = t;
  while (scaled_t * operator_norm(shifted) > 0.5) {
    scaled_t *= 0.5;
    if (++out.squarings > kMaxSquarings) throw HypothesisViolation("matrix exponential overflow: t ||G|| too large");
  }
  const Matrix x = scaled_t * shifted;
  Matrix sum = Matrix::Identity(d, d);
  Matrix term = Matrix::Identity(d, d);
  for (int k = 1; k <= 64; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
    if (max_abs_entry(term) <= kSeriesTol * max_abs_entry(sum)) break;
  }
  sum *= std::exp(-scaled_t * shift);
  for (std::size_t k = 0; k < out.squarings; ++k) {
    sum = sum * sum;
    if (!sum.allFinite()) throw HypothesisViolation("matrix exponential overflow at t = " + format_real(t));
  }

  out.most_negative = std::min(0.0, sum.minCoeff());
  out.clamped = out.most_negative < kNegativeClamp;
  out.value = sum.cwiseMax(0.0);
  return out;
}

Matrix evaluate(const Generator& gen, double t) { return exponential(gen, t).value; }

void SemigroupLimit::write_bound_csv(std::ostream& out) const {
  out << "t,bound,actual\n";
  for (const auto& s : bound_trace) {
    out << format_real(s.t) << ',' << format_real(s.bound) << ',' << format_real(s.actual) << '\n';
  }
}

Matrix bound_sample(const Generator& gen, double tau, const BoundOptions& options) {
  const std::size_t dim = gen.dim();
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<Vector> points;
  if (dim <= options.exhaustive_dim) {
    // Every nonzero 0/1 vertex of B+ = [0,1]^d.
    const std::uint64_t count = std::uint64_t{1} << dim;
    for (std::uint64_t mask = 1; mask < count; ++mask) {
      Vector v(d);
      for (Eigen::Index i = 0; i < d; ++i) v(i) = ((mask >> i) & 1U) ? 1.0 : 0.0;
      points.push_back(std::move(v));
    }
  } else {
    for (std::size_t j = 0; j < dim; ++j) points.push_back(basis_vector(dim, j));
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < options.random_samples; ++k) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = unit(rng);
    v /= v.maxCoeff();
    points.push_back(std::move(v));
  }
  Matrix columns(d, static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) columns.col(static_cast<Eigen::Index>(k)) = points[k];
  return evaluate(gen, tau) * columns;
}

double oscillation_bound(const Generator& gen, const SemigroupLimit& lim, double t, double tau,
                         const BoundOptions& options) {
  if (!(t > tau)) throw DomainError("the oscillation bound needs t > tau");
  if (lim.decomp.is_zero_limit) throw DomainError("the oscillation bound needs a nonzero limit");
  return bound_from_sample(gen, lim.decomp.unit(), bound_sample(gen, tau, options), t, tau);
}

SemigroupLimit semigroup_limit(const Generator& gen, double tau, double horizon, const SemigroupOptions& options) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be positive");
  if (!(horizon >= tau) || !std::isfinite(horizon)) throw DomainError("horizon must be at least tau");

  SemigroupLimit out;
  out.tau = tau;
  const Matrix skeleton = evaluate(gen, tau);

  // Boundedness on t = tau 2^k: S_{2t} = S_t^2.
  const double base_norm = std::max(1.0, operator_norm(skeleton));
  Matrix s = skeleton;
  double t = tau;
  for (std::size_t k = 0; k <= options.max_doublings && t <= horizon; ++k) {
    const double norm = operator_norm(s);
    out.norm_samples.push_back({t, norm});
    if (!std::isfinite(norm) || norm > options.growth_factor * base_norm) {
      throw HypothesisViolation("semigroup norms grow: ||S_" + format_real(t) + "|| = " + format_real(norm));
    }
    s = s * s;
    t *= 2.0;
  }

  out.decomp = limit_decomposition(PositiveOperator(gen.space(), skeleton), options.limit);
  const Matrix& a0 = out.decomp.A0;
  if (out.decomp.is_zero_limit) return out;

  const OrderUnit unit = out.decomp.unit();
  if (gen.row_sum_zero()) {
    out.stationarity_residual = max_norm(gen.matrix().transpose() * *out.decomp.f0);
    if (out.stationarity_residual > options.stationarity_tol) {
      throw HypothesisViolation("limit functional is not stationary for the generator: ||f0 G|| = " +
                                format_real(out.stationarity_residual));
    }
  }

  const Matrix sample = bound_sample(gen, tau, options.bound);
  out.exhaustive = gen.dim() <= options.bound.exhaustive_dim;
  t = tau;
  for (std::size_t k = 0; k <= options.max_doublings; ++k, t *= 2.0) {
    const Matrix st = evaluate(gen, t);
    out.absorption_residual =
        std::max({out.absorption_residual, operator_norm(st * a0 - a0), operator_norm(a0 * st - a0)});
    if (k == 0) continue;
    if (t > horizon) break;
    const double bound = bound_from_sample(gen, unit, sample, t, tau);
    out.bound_trace.push_back({t, bound, operator_norm(st - a0)});
    if (bound < options.bound_floor) break;
  }
  return out;
}

}  // namespace posasym
