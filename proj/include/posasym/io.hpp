#pragma once

// Matrix and vector files.
//
// CSV: one row per line, comma-separated decimals.
// JSON: {"dim": d, "data": [...]} with the d*d entries in row-major order (d entries for
// a vector). Generator files may add {"metzler": true}, which is validated on load.

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "posasym/linalg.hpp"

namespace posasym::io {

using Json = nlohmann::ordered_json;

struct MatrixFile {
  Matrix matrix;
  /// The "metzler" flag of a JSON file, when present.
  std::optional<bool> metzler;
};

/// Reads a square matrix; the format follows the extension (.json, otherwise CSV).
/// Throws IoError on unreadable paths and malformed content.
MatrixFile read_matrix(const std::string& path);

MatrixFile parse_matrix_csv(const std::string& text);
MatrixFile parse_matrix_json(const std::string& text);

/// "1,0,0.5" -> (1, 0, 0.5)
Vector parse_vector(const std::string& text);
/// A vector file: a single CSV row (or column), or JSON {"dim": d, "data": [...]}.
Vector read_vector(const std::string& path);

void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_json(std::ostream& out, const Matrix& m);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);

/// Serializes with a fixed layout: keys in insertion order, two-space indent, and every
/// floating-point number printed with 17 significant digits.
std::string dump(const Json& value);

void write_text(const std::string& path, const std::string& text);

}  // namespace posasym::io
