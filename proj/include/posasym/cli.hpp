#pragma once

// Command-line front end. Subcommands:
//
//   analyze   --input FILE      discrete pipeline: regularity, limit, certificate,
//                               projection identities, fundamental inverse
//   semigroup --input FILE      generator pipeline with the oscillation bound trace
//   example   example1|example2 build a fixture, then analyze it
//   trace     --input FILE --seed-vector X   oscillation trace CSV for one seed
//
// Exit codes: 0 success, 1 I/O, parse or argument errors, 2 hypothesis violations.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "posasym/io.hpp"
#include "posasym/linalg.hpp"

namespace posasym::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitHypothesis = 2;

struct AnalyzeSettings {
  double eps = 1e-10;
  std::optional<std::size_t> cap;
  bool normalize = false;
};

struct SemigroupSettings {
  double tau = 1.0;
  double horizon = 1024.0;
  std::uint64_t seed = 20240917;
  std::size_t samples = 32;
  double eps = 1e-10;
  std::optional<std::size_t> cap;
};

/// The analyze report body for a matrix (everything after the input descriptor).
io::Json analyze_matrix(const Matrix& m, const AnalyzeSettings& settings);

/// The semigroup report body for a generator matrix.
io::Json analyze_generator(const Matrix& g, const SemigroupSettings& settings);

/// Runs the CLI; report files go where the flags say, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace posasym::cli
