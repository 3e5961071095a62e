#include "posasym/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "posasym/asymptotics.hpp"
#include "posasym/errors.hpp"
#include "posasym/fixtures.hpp"
#include "posasym/oscillation.hpp"
#include "posasym/semigroup.hpp"

namespace posasym::cli {

namespace {

using io::Json;

constexpr std::size_t kIdentityPowers[] = {1, 2, 5, 17};

Json optional_index(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

Json regularity_section(const LimitDecomposition& d) {
  Json r;
  r["per_basis_index"] = d.positivity_indices;
  r["uniform_index"] = optional_index(d.uniform_index);
  return r;
}

// Fills the limit, certificate and residual sections shared by every pipeline.
void decomposition_sections(Json& report, const PositiveOperator& a, const LimitDecomposition& d,
                            const FundamentalOptions& fundamental) {
  report["regularity"] = regularity_section(d);
  report["zero_limit"] = d.is_zero_limit;
  report["u"] = d.u ? io::to_json(*d.u) : Json(nullptr);
  report["f0"] = d.f0 ? io::to_json(*d.f0) : Json(nullptr);
  report["A0"] = io::to_json(d.A0);
  if (d.certificate) {
    Json c;
    c["p"] = d.certificate->p;
    c["beta"] = d.certificate->beta;
    c["contraction"] = d.certificate->contraction();
    report["certificate"] = c;
  } else {
    report["certificate"] = nullptr;
  }

  Json residuals;
  residuals["power"] = d.power_residual;
  Json samples = Json::array();
  for (const auto& s : d.power_samples) samples.push_back(Json{{"n", s.n}, {"norm", s.norm}});
  residuals["power_samples"] = std::move(samples);
  Json identities = Json::array();
  for (std::size_t n : kIdentityPowers) {
    const ProjectionIdentities r = check_projection_identities(a, d, n);
    identities.push_back(Json{{"n", r.n},
                              {"idempotence", r.idempotence},
                              {"left_absorption", r.left_absorption},
                              {"right_absorption", r.right_absorption},
                              {"power_identity", r.power_identity}});
  }
  residuals["projection_identities"] = std::move(identities);
  if (!d.is_zero_limit) {
    const SimpleEigenvalueReport s = check_simple_eigenvalue(a, d);
    residuals["simple_eigenvalue"] = Json{{"nullity", s.nullity},
                                          {"adjoint_nullity", s.adjoint_nullity},
                                          {"fixed_residual", s.fixed_residual},
                                          {"adjoint_residual", s.adjoint_residual}};
  }
  report["residuals"] = std::move(residuals);

  const FundamentalInverse inv = fundamental_inverse(a, d, fundamental);
  report["fundamental_inverse"] = Json{{"terms", inv.terms},
                                       {"last_term_norm", inv.last_term_norm},
                                       {"residual", inv.residual},
                                       {"inverse", io::to_json(inv.inverse)}};
}

LimitOptions limit_options(std::optional<std::size_t> cap) {
  LimitOptions o;
  o.cap = cap;
  return o;
}

struct GeneratorRun {
  Json report;
  SemigroupLimit limit;
};

GeneratorRun run_generator(const Matrix& g, const SemigroupSettings& settings) {
  const Vector sums = g.rowwise().sum();
  const double scale = std::max(1.0, max_abs_entry(g));
  const bool markov = max_norm(sums) <= 1e-12 * scale;
  const Generator gen(g, markov);

  SemigroupOptions options;
  options.limit = limit_options(settings.cap);
  options.bound.seed = settings.seed;
  options.bound.random_samples = settings.samples;

  GeneratorRun run{Json::object(), semigroup_limit(gen, settings.tau, settings.horizon, options)};
  const SemigroupLimit& lim = run.limit;
  const PositiveOperator skeleton(gen.space(), evaluate(gen, settings.tau));

  Json& report = run.report;
  decomposition_sections(report, skeleton, lim.decomp, FundamentalOptions{.eps = settings.eps});

  Json section;
  section["tau"] = settings.tau;
  section["horizon"] = settings.horizon;
  section["row_sum_zero"] = markov;
  section["stationarity_residual"] = lim.stationarity_residual;
  section["absorption_residual"] = lim.absorption_residual;
  Json norms = Json::array();
  for (const auto& s : lim.norm_samples) norms.push_back(Json{{"t", s.t}, {"norm", s.norm}});
  section["norm_samples"] = std::move(norms);
  section["bound_sample"] = Json{{"exhaustive_vertices", lim.exhaustive},
                                 {"random_samples", settings.samples},
                                 {"seed", settings.seed},
                                 {"label", lim.exhaustive ? "vertices" : "sampled"}};
  Json trace = Json::array();
  for (const auto& s : lim.bound_trace) trace.push_back(Json{{"t", s.t}, {"bound", s.bound}, {"actual", s.actual}});
  section["bound_trace"] = std::move(trace);
  report["semigroup"] = std::move(section);
  return run;
}

Json header(const std::string& command, const std::string& source, std::size_t dim) {
  Json h;
  h["schema_version"] = kSchemaVersion;
  h["command"] = command;
  h["input"] = Json{{"source", source}, {"dim", dim}};
  return h;
}

void merge(Json& into, const Json& from) {
  for (const auto& [k, v] : from.items()) into[k] = v;
}

void emit(const Json& report, const std::string& output, std::ostream& out) {
  const std::string text = io::dump(report) + "\n";
  if (output.empty() || output == "-") {
    out << text;
  } else {
    io::write_text(output, text);
  }
}

template <class Fn>
int guarded(Fn&& fn, Json report, const std::string& output, std::ostream& out, std::ostream& err) {
  try {
    fn(report);
    report["status"] = "ok";
    emit(report, output, out);
    return kExitOk;
  } catch (const HypothesisViolation& e) {
    err << "hypothesis violation: " << e.what() << '\n';
    report["status"] = "hypothesis_violation";
    report["diagnostic"] = e.what();
    try {
      emit(report, output, out);
    } catch (const Error& io_error) {
      err << "error: " << io_error.what() << '\n';
      return kExitInputError;
    }
    return kExitHypothesis;
  }
}

void add_timing(Json& report, bool enabled, std::chrono::steady_clock::time_point start) {
  if (!enabled) return;
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report["timings"] = Json{{"total_seconds", elapsed}};
}

}  // namespace

Json analyze_matrix(const Matrix& m, const AnalyzeSettings& settings) {
  Json report = Json::object();
  Matrix matrix = m;
  if (settings.normalize) {
    const PerronEstimate est = perron_estimate(PositiveOperator(m));
    if (!(est.value() > 0.0)) throw HypothesisViolation("cannot normalize: Perron root is zero");
    matrix /= est.value();
    report["preprocessing"] = Json{{"normalized_by", est.value()}};
  }
  const PositiveOperator a(matrix);
  const LimitDecomposition d = limit_decomposition(a, limit_options(settings.cap));
  decomposition_sections(report, a, d, FundamentalOptions{.eps = settings.eps});
  return report;
}

Json analyze_generator(const Matrix& g, const SemigroupSettings& settings) {
  return run_generator(g, settings).report;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limit operators and convergence certificates for positive operators and semigroups", "posasym"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  bool timings = false;

  AnalyzeSettings analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a positive matrix");
  analyze_cmd->add_option("--input", input, "Matrix file (.csv or .json)")->required();
  analyze_cmd->add_option("--output", output, "Report path (stdout when omitted)");
  analyze_cmd->add_option("--eps", analyze.eps, "Fundamental series tolerance");
  analyze_cmd->add_option("--cap", analyze.cap, "Positivity index search cap (default dim^2 + 1)");
  analyze_cmd->add_flag("--normalize", analyze.normalize, "Divide the matrix by its Perron root first");
  analyze_cmd->add_flag("--timings", timings, "Add wall-clock timings to the report");

  SemigroupSettings semigroup;
  std::string bound_csv;
  auto* semigroup_cmd = app.add_subcommand("semigroup", "Analyze exp(tG) for a Metzler generator G");
  semigroup_cmd->add_option("--input", input, "Generator file (.csv or .json)")->required();
  semigroup_cmd->add_option("--output", output, "Report path (stdout when omitted)");
  semigroup_cmd->add_option("--tau", semigroup.tau, "Skeleton time step");
  semigroup_cmd->add_option("--horizon", semigroup.horizon, "Largest time on the sampling grid");
  semigroup_cmd->add_option("--seed", semigroup.seed, "Seed for the random part of the bound sample");
  semigroup_cmd->add_option("--samples", semigroup.samples, "Random positive unit vectors in the bound sample");
  semigroup_cmd->add_option("--eps", semigroup.eps, "Fundamental series tolerance");
  semigroup_cmd->add_option("--cap", semigroup.cap, "Positivity index search cap");
  semigroup_cmd->add_option("--bound-csv", bound_csv, "Write t,bound,actual to this file");
  semigroup_cmd->add_flag("--timings", timings, "Add wall-clock timings to the report");

  std::string example_name;
  double theta = 0.25;
  std::size_t grid = 512;
  std::size_t truncation = 16;
  auto* example_cmd = app.add_subcommand("example", "Build a fixture operator and analyze it");
  example_cmd->add_option("name", example_name, "example1 | example2")
      ->required()
      ->check(CLI::IsMember({"example1", "example2"}));
  example_cmd->add_option("--theta", theta, "example1: theta in (0,1)");
  example_cmd->add_option("--grid", grid, "example1: number of grid cells");
  example_cmd->add_option("--n", truncation, "example2: truncation size");
  example_cmd->add_option("--output", output, "Report path (stdout when omitted)");
  example_cmd->add_option("--eps", analyze.eps, "Fundamental series tolerance");
  example_cmd->add_flag("--timings", timings, "Add wall-clock timings to the report");

  std::string seed_vector;
  std::string unit_vector;
  TraceOptions trace_options;
  trace_options.eps = 1e-10;
  auto* trace_cmd = app.add_subcommand("trace", "Write the oscillation trace of one seed vector as CSV");
  trace_cmd->add_option("--input", input, "Matrix file (.csv or .json)")->required();
  trace_cmd->add_option("--seed-vector", seed_vector, "Comma-separated seed, or a vector file")->required();
  trace_cmd->add_option("--unit", unit_vector, "Order unit u with Au = u (computed when omitted)");
  trace_cmd->add_option("--eps", trace_options.eps, "Relative oscillation tolerance");
  trace_cmd->add_option("--max-steps", trace_options.max_steps, "Step budget");
  trace_cmd->add_option("--output", output, "CSV path (stdout when omitted)");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (analyze_cmd->parsed()) {
      const Matrix m = io::read_matrix(input).matrix;
      return guarded(
          [&](Json& report) {
            merge(report, analyze_matrix(m, analyze));
            add_timing(report, timings, start);
          },
          header("analyze", input, static_cast<std::size_t>(m.rows())), output, out, err);
    }
    if (semigroup_cmd->parsed()) {
      const io::MatrixFile file = io::read_matrix(input);
      if (file.metzler && !*file.metzler) throw DomainError("input declares \"metzler\": false");
      return guarded(
          [&](Json& report) {
            GeneratorRun run = run_generator(file.matrix, semigroup);
            merge(report, run.report);
            if (!bound_csv.empty()) {
              std::ostringstream csv;
              run.limit.write_bound_csv(csv);
              io::write_text(bound_csv, csv.str());
            }
            add_timing(report, timings, start);
          },
          header("semigroup", input, static_cast<std::size_t>(file.matrix.rows())), output, out, err);
    }
    if (example_cmd->parsed()) {
      if (example_name == "example1") {
        const fixtures::IntegralOperator op = fixtures::build_example1(theta, grid);
        Json h = header("example", "example1", grid);
        h["input"]["theta"] = theta;
        h["input"]["grid"] = grid;
        return guarded(
            [&](Json& report) {
              Json fixture;
              fixture["markov_defect"] = op.markov_defect();
              Json indices = Json::array();
              for (double p : {0.1, 0.6, 0.8}) {
                Json entry{{"p", p}, {"analytic", fixtures::example1_analytic_index(theta, p)}};
                try {
                  entry["computed"] = fixtures::example1_positivity_index(op, p);
                } catch (const DomainError& e) {
                  entry["computed"] = nullptr;
                  entry["note"] = e.what();
                }
                indices.push_back(std::move(entry));
              }
              fixture["positivity_indices"] = std::move(indices);
              fixture["analyzed_matrix"] = "row-normalized";
              report["fixture"] = std::move(fixture);
              merge(report, analyze_matrix(op.stochastic_matrix(), analyze));
              add_timing(report, timings, start);
            },
            std::move(h), output, out, err);
      }
      const fixtures::StochasticSequenceOperator op = fixtures::build_example2(truncation);
      Json h = header("example", "example2", truncation);
      h["input"]["n"] = truncation;
      return guarded(
          [&](Json& report) {
            const fixtures::LimitDistributionReport dist = fixtures::example2_limit_distribution(op);
            Json fixture;
            fixture["closed_form"] = io::to_json(dist.closed_form);
            fixture["compared_coordinates"] = dist.compared;
            fixture["max_error"] = dist.max_error;
            Json pattern = Json::array();
            for (std::size_t n = 1; n + 3 <= truncation && n <= 6; ++n) {
              const fixtures::EventualPositivityReport r = fixtures::example2_eventual_positivity(op, n);
              pattern.push_back(Json{{"n", n},
                                     {"first_coordinate", r.first_coordinate},
                                     {"next_power_interior", r.next_power_interior},
                                     {"second_next_power_interior", r.second_next_power_interior},
                                     {"basis_indices", r.basis_indices},
                                     {"index_grows_with_basis", r.index_grows_with_basis}});
            }
            fixture["eventual_positivity"] = std::move(pattern);
            report["fixture"] = std::move(fixture);
            merge(report, analyze_matrix(op.matrix, analyze));
            add_timing(report, timings, start);
          },
          std::move(h), output, out, err);
    }
    if (trace_cmd->parsed()) {
      const Matrix m = io::read_matrix(input).matrix;
      const PositiveOperator a(m);
      const bool seed_is_file = seed_vector.find(',') == std::string::npos && std::ifstream(seed_vector).good();
      const Vector x = seed_is_file ? io::read_vector(seed_vector) : io::parse_vector(seed_vector);
      try {
        Vector u;
        if (!unit_vector.empty()) {
          u = io::parse_vector(unit_vector);
        } else {
          const LimitDecomposition d = limit_decomposition(a);
          if (d.is_zero_limit) throw HypothesisViolation("operator has a zero limit; no fixed order unit");
          u = *d.u;
        }
        const OscillationTrace trace = trace_until(a, OrderUnit(a.space(), u), x, trace_options);
        std::ostringstream csv;
        trace.write_csv(csv);
        if (output.empty() || output == "-") {
          out << csv.str();
        } else {
          io::write_text(output, csv.str());
        }
        if (!trace.converged()) {
          err << "trace hit the step budget with delta = " << trace.final().delta() << '\n';
        }
        return kExitOk;
      } catch (const HypothesisViolation& e) {
        err << "hypothesis violation: " << e.what() << '\n';
        return kExitHypothesis;
      }
    }
  } catch (const HypothesisViolation& e) {
    err << "hypothesis violation: " << e.what() << '\n';
    return kExitHypothesis;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace posasym::cli
