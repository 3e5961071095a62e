// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   posasym_acceptance          run every criterion
//   posasym_acceptance 4 7      run the listed criteria
//
// Exit status is 0 only if every selected criterion passes.

#include <Eigen/LU>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "posasym/asymptotics.hpp"
#include "posasym/cli.hpp"
#include "posasym/errors.hpp"
#include "posasym/fixtures.hpp"
#include "posasym/format.hpp"
#include "posasym/semigroup.hpp"

namespace {

using namespace posasym;
using testing::Rng;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 = none
  std::function<Outcome()> run;
};

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string list(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

// Regular power-bounded corpus shared by criteria 5-7: A = diag(u) S diag(u)^-1.
std::vector<Matrix> regular_corpus() {
  Rng rng(5005);
  std::vector<Matrix> out;
  for (int k = 0; k < 50; ++k) {
    const std::size_t dim = testing::uniform_size(rng, 2, 20);
    const Vector u = testing::random_unit(rng, dim);
    out.push_back(testing::similar_to(testing::random_primitive_stochastic(rng, dim), u));
  }
  return out;
}

Outcome criterion1() {
  Outcome o;
  const auto op = fixtures::build_example2(16);
  try {
    const auto r = fixtures::example2_limit_distribution(op, 1e-8);
    o.require(r.compared == 10, "compared " + std::to_string(r.compared) + " coordinates");
    o.note("max |f0_n - (c_n - c_{n+1})| over n <= 10 = " + real(r.max_error) + " (tol 1e-8)");
  } catch (const Error& e) {
    o.require(false, e.what());
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto op = fixtures::build_example2(16);
  const PositiveOperator a(op.matrix);
  for (std::size_t n = 1; n <= 6; ++n) {
    Vector v = basis_vector(16, n + 1);
    for (std::size_t k = 0; k < n; ++k) v = op.matrix * v;
    o.require(v(0) == 0.0, "(A^" + std::to_string(n) + " e_" + std::to_string(n + 2) + ")_1 = " + real(v(0)));
    v = op.matrix * v;
    o.require(in_interior(a.space(), v), "A^" + std::to_string(n + 1) + " e_" + std::to_string(n + 2) +
                                             " is not interior");
  }
  // Per-basis indices max(1, j - 1) for j <= N - 1: the index needed grows without bound
  // along the basis, so the smallest p serving e_1..e_{N-1} grows with N.
  const auto pattern = fixtures::example2_eventual_positivity(op, 1);
  o.require(pattern.index_grows_with_basis, "basis indices " + list(pattern.basis_indices));
  std::vector<std::size_t> uniform;
  for (std::size_t n : {8u, 16u, 32u}) {
    const PositiveOperator b(fixtures::build_example2(n).matrix);
    std::size_t p = 0;
    for (std::size_t j = 0; j + 1 < n; ++j) p = std::max(p, find_positivity_index(b, basis_vector(n, j)).value_or(0));
    uniform.push_back(p);
    o.require(p == n - 2, "N = " + std::to_string(n) + ": smallest p for e_1..e_{N-1} is " + std::to_string(p));
  }
  o.note("smallest p serving e_1..e_{N-1} for N = 8, 16, 32: " + list(uniform));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const double theta = 0.25;
  const auto op = fixtures::build_example1(theta, 512);
  const double d512 = op.markov_defect();
  const double d1024 = fixtures::build_example1(theta, 1024).markov_defect();
  const double d2048 = fixtures::build_example1(theta, 2048).markov_defect();
  o.require(d512 <= 1e-2, "defect at 512 = " + real(d512));
  o.require(d1024 <= 0.55 * d512, "defect 512 -> 1024 not halved");
  o.require(d2048 <= 0.55 * d1024, "defect 1024 -> 2048 not halved");
  o.note("||A1 - 1|| at 512/1024/2048 = " + real(d512) + "/" + real(d1024) + "/" + real(d2048) +
         " (halving: ratio <= 0.55)");

  const std::vector<std::size_t> stated{1, 2, 3};
  std::vector<std::size_t> computed;
  std::vector<std::size_t> analytic;
  for (double p : {0.1, 0.6, 0.8}) {
    computed.push_back(fixtures::example1_positivity_index(op, p));
    analytic.push_back(fixtures::example1_analytic_index(theta, p));
  }
  o.require(computed == stated, "indices at p = 0.1, 0.6, 0.8 are " + list(computed) + ", expected " + list(stated));
  o.note("analytic indices " + list(analytic) + ", computed on the grid " + list(computed));
  return o;
}

Outcome criterion4() {
  Outcome o;
  Rng rng(4004);
  std::size_t checks = 0;
  std::size_t failures = 0;
  double worst = -1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = testing::uniform_size(rng, 2, 12);
    const PositiveOperator a(testing::random_primitive_stochastic(rng, dim));
    const auto d = limit_decomposition(a);
    if (!d.certificate) {
      o.require(false, "no certificate for matrix " + std::to_string(trial));
      continue;
    }
    const auto& cert = *d.certificate;
    const OrderUnit unit = d.unit();
    const Matrix step = matrix_power(a.matrix(), cert.p);
    for (int s = 0; s < 5; ++s) {
      Vector x = testing::random_positive(rng, dim);
      const double delta0 = oscillation_bounds(unit, x).delta();
      for (std::size_t k = 0; k <= 100000; ++k) {
        const double delta = oscillation_bounds(unit, x).delta();
        const double excess = delta - (cert.bound(k, delta0) + 1e-10);
        worst = std::max(worst, excess);
        ++checks;
        if (excess > 0.0) ++failures;
        if (delta <= 1e-15 * std::max(1.0, delta0)) break;
        x = step * x;
      }
    }
  }
  o.require(failures == 0, std::to_string(failures) + " violations");
  o.note(std::to_string(checks) + " checks of delta(kp) <= (1-2beta)^k delta(0) + 1e-10, max excess " + real(worst));
  return o;
}

Outcome criterion5() {
  Outcome o;
  double worst = 0.0;
  for (const Matrix& m : regular_corpus()) {
    const PositiveOperator a(m);
    const auto d = limit_decomposition(a);
    Matrix oracle = m;
    for (int n = 1; n < 1000; ++n) oracle = oracle * m;
    worst = std::max(worst, (oracle - d.A0).cwiseAbs().maxCoeff());
  }
  o.require(worst <= 1e-10, "max entry error " + real(worst));
  o.note("50 matrices, max |A^1000 - A0| entry = " + real(worst) + " (tol 1e-10)");
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst = 0.0;
  for (const Matrix& m : regular_corpus()) {
    const PositiveOperator a(m);
    const auto d = limit_decomposition(a);
    const auto series = fundamental_inverse(a, d, {.eps = 1e-13});
    const auto n = m.rows();
    const Matrix direct = Eigen::PartialPivLU<Matrix>(Matrix::Identity(n, n) - m + d.A0).inverse();
    worst = std::max(worst, (series.inverse - direct).cwiseAbs().maxCoeff());
  }
  o.require(worst <= 1e-9, "regular corpus error " + real(worst));

  Rng rng(6006);
  const PositiveOperator z(0.5 * testing::random_primitive_stochastic(rng, 8));
  const auto dz = limit_decomposition(z);
  o.require(dz.is_zero_limit, "zero-limit instance not detected");
  const auto series = fundamental_inverse(z, dz, {.eps = 1e-13});
  const Matrix direct = Eigen::PartialPivLU<Matrix>(Matrix::Identity(8, 8) - z.matrix()).inverse();
  const double zero_err = (series.inverse - direct).cwiseAbs().maxCoeff();
  o.require(zero_err <= 1e-9, "zero-limit error " + real(zero_err));
  o.note("series vs dense inverse: corpus " + real(worst) + ", zero limit " + real(zero_err) + " (tol 1e-9)");
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst = 0.0;
  for (const Matrix& m : regular_corpus()) {
    const PositiveOperator a(m);
    const auto d = limit_decomposition(a);
    for (std::size_t n : {1u, 2u, 5u, 17u}) worst = std::max(worst, check_projection_identities(a, d, n).max());
  }
  o.require(worst < 1e-11, "max residual " + real(worst));
  o.note("max residual over A0^2 = A0, A A0 = A0 A = A0, (A - A0)^n = A^n - A0: " + real(worst) + " (tol 1e-11)");
  return o;
}

Outcome criterion8() {
  Outcome o;
  Rng rng(8008);
  double law = 0.0;
  double stationarity = 0.0;
  double agreement = 0.0;
  std::size_t grid_points = 0;
  std::size_t dominance_failures = 0;
  std::size_t monotone_failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = testing::uniform_size(rng, 2, 10);
    const Generator g(testing::random_markov_generator(rng, dim), true);
    for (int k = 0; k < 5; ++k) {
      const double s = testing::uniform(rng, 0.0, 5.0);
      const double t = testing::uniform(rng, 0.0, 5.0);
      law = std::max(law, operator_norm(evaluate(g, s + t) - evaluate(g, s) * evaluate(g, t)));
    }
    const auto lim = semigroup_limit(g, 1.0, 1e6);
    stationarity = std::max(stationarity, max_norm(g.matrix().transpose() * *lim.decomp.f0));
    const auto discrete = limit_decomposition(PositiveOperator(evaluate(g, 1.0)));
    agreement = std::max(agreement, (lim.decomp.A0 - discrete.A0).cwiseAbs().maxCoeff());
    const auto half = semigroup_limit(g, 0.5, 1e6);
    agreement = std::max(agreement, (lim.decomp.A0 - half.decomp.A0).cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k < lim.bound_trace.size(); ++k) {
      const auto& b = lim.bound_trace[k];
      ++grid_points;
      if (b.bound < b.actual - 1e-12) ++dominance_failures;
      if (k > 0 && b.bound > lim.bound_trace[k - 1].bound) ++monotone_failures;
    }
  }
  o.require(law < 1e-11, "semigroup law residual " + real(law));
  o.require(stationarity <= 1e-10, "||f0 G|| = " + real(stationarity));
  o.require(agreement <= 1e-10, "A0 disagreement " + real(agreement));
  o.require(dominance_failures == 0, std::to_string(dominance_failures) + " grid points where bound < actual - 1e-12");
  o.require(monotone_failures == 0, std::to_string(monotone_failures) + " increases of the bound");
  o.note("law " + real(law) + ", ||f0 G|| " + real(stationarity) + ", A0 tau=1 vs S_1 and tau=1/2 " +
         real(agreement) + ", bound checked at " + std::to_string(grid_points) + " grid points");
  return o;
}

Outcome criterion9() {
  Outcome o;
  Rng rng(9009);
  constexpr double kSlack = 1e-12;
  std::size_t adjoint = 0;
  std::size_t contraction = 0;
  std::size_t bounded = 0;
  std::size_t interior = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = testing::uniform_size(rng, 1, 10);
    const Vector u = testing::random_unit(rng, dim, 0.2, 5.0);
    const PositiveOperator a(testing::similar_to(testing::random_stochastic(rng, dim), u));
    const OrderUnit unit(a.space(), u);

    const Vector f = testing::random_positive(rng, dim);
    if ((a.matrix().transpose() * f).minCoeff() < -kSlack) ++adjoint;

    const Vector x = testing::random_signed(rng, dim);
    if (u_norm(unit, a.apply(x)) > u_norm(unit, x) + kSlack) ++contraction;

    const auto n = testing::uniform_size(rng, 1, 64);
    const double c = unit.norm_constant();
    if (operator_norm(matrix_power(a.matrix(), n)) > c * c + kSlack) ++bounded;

    const Vector y = testing::random_positive(rng, dim) + Vector::Constant(static_cast<Eigen::Index>(dim), 1e-3);
    if (!in_interior(a.space(), a.apply(y))) ++interior;
  }
  o.require(adjoint + contraction + bounded + interior == 0,
            "violations: adjoint " + std::to_string(adjoint) + ", contraction " + std::to_string(contraction) +
                ", power bound " + std::to_string(bounded) + ", interior " + std::to_string(interior));
  o.note("1000 cases, slack 1e-12");
  return o;
}

std::string run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"posasym"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome criterion10() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "posasym_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "chain.csv") << "0.5,0.3,0.2\n0.1,0.6,0.3\n0.4,0.4,0.2\n";
  std::ofstream(dir / "gen.csv") << "-1,1,0\n0.5,-1,0.5\n0,2,-2\n";
  std::ofstream(dir / "perm.csv") << "0,1\n1,0\n";
  const std::string chain = (dir / "chain.csv").string();
  const std::string gen = (dir / "gen.csv").string();
  const std::string perm = (dir / "perm.csv").string();

  const std::vector<std::vector<std::string>> commands{
      {"analyze", "--input", chain},
      {"analyze", "--input", perm},
      {"semigroup", "--input", gen, "--seed", "17"},
      {"example", "example1", "--grid", "128"},
      {"example", "example2", "--n", "16"},
      {"trace", "--input", chain, "--seed-vector", "1,0,0"},
  };
  std::size_t compared = 0;
  for (const auto& cmd : commands) {
    const std::string first = run_cli(cmd);
    const std::string second = run_cli(cmd);
    ++compared;
    o.require(!first.empty() && first == second, "in-process output differs for " + cmd[0]);
  }
#ifdef POSASYM_CLI_PATH
  for (std::size_t k = 0; k < commands.size(); ++k) {
    std::string line = POSASYM_CLI_PATH;
    for (const auto& a : commands[k]) line += " " + a;
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("run" + std::to_string(k) + "_" + std::to_string(rep) + ".out");
      const int rc = std::system((line + " > " + out.string() + " 2>/dev/null").c_str());
      (void)rc;
      outputs[rep] = slurp(out);
    }
    ++compared;
    o.require(!outputs[0].empty() && outputs[0] == outputs[1], "process output differs for " + commands[k][0]);
    o.require(outputs[0] == run_cli(commands[k]), "process and in-process output differ for " + commands[k][0]);
  }
#endif
  fs::remove_all(dir);
  o.note(std::to_string(compared) + " repeated runs compared byte for byte");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "stochastic sequence operator: limit distribution", 1.0, criterion1},
      {2, "stochastic sequence operator: positivity pattern", 1.0, criterion2},
      {3, "integral operator: Markov identity and positivity indices", 10.0, criterion3},
      {4, "contraction certificate", 30.0, criterion4},
      {5, "oracle equivalence with A^1000", 30.0, criterion5},
      {6, "fundamental inverse", 30.0, criterion6},
      {7, "projection identities", 0.0, criterion7},
      {8, "semigroup suite", 60.0, criterion8},
      {9, "order-unit property suite", 0.0, criterion9},
      {10, "determinism", 0.0, criterion10},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  bool all = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0) outcome.require(seconds < c.time_limit, "runtime over " + real(c.time_limit) + " s");
    all = all && outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " ["
              << real(seconds) << " s" << (c.time_limit > 0.0 ? " / limit " + real(c.time_limit) + " s" : "")
              << "] " << outcome.detail << std::endl;
  }
  return all ? 0 : 1;
}
