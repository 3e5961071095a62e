#include "posasym/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "posasym/errors.hpp"
#include "posasym/format.hpp"

namespace posasym {

namespace {

void require_fixed_unit(const PositiveOperator& a, const OrderUnit& unit, double tol) {
  if (!fixes_unit(a, unit, tol)) {
    const Vector residual = a.matrix() * unit.u() - unit.u();
    throw HypothesisViolation("order unit is not a fixed point of the operator: ||Au - u||_u = " +
                              format_real(u_norm(unit, residual)));
  }
}

// Tracks monotone nesting and the stopping rule for one trajectory.
class TraceRecorder {
 public:
  TraceRecorder(const TraceOptions& options, const OscillationBounds& initial) : options_(options) {
    steps_.push_back({0, initial.upper, initial.lower});
    scale_ = std::max({std::abs(initial.upper), std::abs(initial.lower),
                       std::numeric_limits<double>::min()});
    target_ = std::max(options.eps * initial.delta(), options.delta_floor);
    done_ = initial.delta() <= target_;
  }

  bool done() const noexcept { return done_; }

  void record(std::size_t n, const OscillationBounds& b) {
    const OscillationStep& prev = steps_.back();
    const double slack = options_.monotone_slack * scale_;
    if (b.upper > prev.upper + slack || b.lower < prev.lower - slack || b.lower > b.upper + slack) {
      throw HypothesisViolation("oscillation is not monotone at step " + std::to_string(n) +
                                ": M " + format_real(prev.upper) + " -> " + format_real(b.upper) +
                                ", m " + format_real(prev.lower) + " -> " + format_real(b.lower));
    }
    steps_.push_back({n, b.upper, b.lower});
    done_ = b.delta() <= target_;
  }

  std::vector<OscillationStep> take() { return std::move(steps_); }

 private:
  const TraceOptions& options_;
  std::vector<OscillationStep> steps_;
  double scale_ = 1.0;
  double target_ = 0.0;
  bool done_ = false;
};

}  // namespace

OscillationTrace::OscillationTrace(Vector seed, OrderUnit unit, std::vector<OscillationStep> steps,
                                   TraceStatus status)
    : seed_(std::move(seed)), unit_(std::move(unit)), steps_(std::move(steps)), status_(status) {
  unit_.space().check(seed_);
  if (steps_.empty()) throw DomainError("oscillation trace needs at least the initial step");
}

void OscillationTrace::write_csv(std::ostream& out) const {
  out << "n,M,m,delta\n";
  for (const auto& s : steps_) {
    out << s.n << ',' << format_real(s.upper) << ',' << format_real(s.lower) << ','
        << format_real(s.delta()) << '\n';
  }
}

OscillationBounds oscillation_bounds(const OrderUnit& unit, const Vector& v) {
  unit.space().check(v);
  const Vector scaled = v.cwiseQuotient(unit.u());
  return {scaled.maxCoeff(), scaled.minCoeff()};
}

OscillationBounds oscillation_step(const PositiveOperator& a, const OrderUnit& unit, const Vector& x,
                                   std::size_t n, double fixed_point_tol) {
  a.space().check(x);
  require_fixed_unit(a, unit, fixed_point_tol);
  Vector v = x;
  for (std::size_t k = 0; k < n; ++k) v = a.matrix() * v;
  return oscillation_bounds(unit, v);
}

OscillationTrace trace_until(const PositiveOperator& a, const OrderUnit& unit, const Vector& x,
                             const TraceOptions& options) {
  a.space().check(x);
  require_fixed_unit(a, unit, options.fixed_point_tol);
  Vector v = x;
  TraceRecorder recorder(options, oscillation_bounds(unit, v));
  std::size_t n = 0;
  while (!recorder.done() && n < options.max_steps) {
    v = a.matrix() * v;
    ++n;
    recorder.record(n, oscillation_bounds(unit, v));
  }
  const auto status = recorder.done() ? TraceStatus::kConverged : TraceStatus::kStepLimit;
  return OscillationTrace(x, unit, recorder.take(), status);
}

std::vector<OscillationTrace> trace_basis(const PositiveOperator& a, const OrderUnit& unit,
                                          const TraceOptions& options) {
  require_fixed_unit(a, unit, options.fixed_point_tol);
  const auto d = static_cast<Eigen::Index>(a.dim());
  const Vector inv_u = unit.u().cwiseInverse();

  // Column j of block is A^n e_j.
  Matrix block = Matrix::Identity(d, d);
  std::vector<TraceRecorder> recorders;
  recorders.reserve(a.dim());
  for (Eigen::Index j = 0; j < d; ++j) {
    recorders.emplace_back(options, oscillation_bounds(unit, block.col(j)));
  }
  auto pending = [&] {
    return std::count_if(recorders.begin(), recorders.end(), [](const auto& r) { return !r.done(); });
  };

  std::size_t n = 0;
  while (pending() > 0 && n < options.max_steps) {
    block = a.matrix() * block;
    ++n;
    const Matrix scaled = inv_u.asDiagonal() * block;
    for (Eigen::Index j = 0; j < d; ++j) {
      auto& r = recorders[static_cast<std::size_t>(j)];
      if (r.done()) continue;
      r.record(n, {scaled.col(j).maxCoeff(), scaled.col(j).minCoeff()});
    }
  }

  std::vector<OscillationTrace> traces;
  traces.reserve(a.dim());
  for (Eigen::Index j = 0; j < d; ++j) {
    auto& r = recorders[static_cast<std::size_t>(j)];
    const auto status = r.done() ? TraceStatus::kConverged : TraceStatus::kStepLimit;
    traces.emplace_back(basis_vector(a.dim(), static_cast<std::size_t>(j)), unit, r.take(), status);
  }
  return traces;
}

Vector limit_functional(const PositiveOperator& a, const OrderUnit& unit,
                        const std::vector<OscillationTrace>& basis_traces) {
  if (basis_traces.size() != a.dim()) throw DimensionError(a.dim(), basis_traces.size());
  if (unit.dim() != a.dim()) throw DimensionError(a.dim(), unit.dim());
  Vector f0(static_cast<Eigen::Index>(a.dim()));
  for (std::size_t j = 0; j < a.dim(); ++j) {
    const auto& trace = basis_traces[j];
    if (trace.seed() != basis_vector(a.dim(), j)) {
      throw DomainError("trace " + std::to_string(j + 1) + " is not seeded with basis vector " +
                        std::to_string(j + 1));
    }
    if (!trace.converged()) {
      throw ConvergenceError("trace of basis vector " + std::to_string(j + 1) +
                             " has no common limit: delta stays at " + format_real(trace.final().delta()) +
                             " after " + std::to_string(trace.final().n) + " steps");
    }
    const auto& last = trace.final();
    f0(static_cast<Eigen::Index>(j)) = 0.5 * (last.upper + last.lower);
  }
  return f0;
}

double RateCertificate::bound(std::size_t k, double initial_delta) const {
  return std::pow(contraction(), static_cast<double>(k)) * initial_delta;
}

RateCertificate certify_rate(const PositiveOperator& a, const OrderUnit& unit, std::size_t p,
                             double fixed_point_tol) {
  if (p == 0) throw DomainError("certificate index p must be positive");
  require_fixed_unit(a, unit, fixed_point_tol);
  const Matrix power = matrix_power(a.matrix(), p);
  const Vector& u = unit.u();
  // Entry (i, k): coordinate functional i applied to A^p (u_k e_k).
  const Matrix margins = u.cwiseInverse().asDiagonal() * power * u.asDiagonal();
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  const double beta = margins.minCoeff(&row, &col);
  if (!(beta > 0.0)) {
    throw HypothesisViolation("A^" + std::to_string(p) + " is not strongly positive: column " +
                              std::to_string(col + 1) + " has zero ratio at row " + std::to_string(row + 1));
  }
  RateCertificate cert;
  cert.p = p;
  cert.beta = beta >= 0.5 ? std::nextafter(0.5, 0.0) : beta;
  return cert;
}

RateCertificate certify_rate(const PositiveOperator& a, const OrderUnit& unit, std::size_t p,
                             const Vector& x, double fixed_point_tol) {
  RateCertificate cert = certify_rate(a, unit, p, fixed_point_tol);
  cert.delta0 = oscillation_bounds(unit, x).delta();
  return cert;
}

}  // namespace posasym
