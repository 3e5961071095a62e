#include "posasym/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "posasym/errors.hpp"
#include "posasym/format.hpp"

namespace posasym::io {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& token, std::size_t line) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || token.empty()) {
    throw IoError("line " + std::to_string(line) + ": cannot parse number '" + token + "'");
  }
  return value;
}

std::vector<std::vector<double>> parse_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      row.push_back(parse_number(trim(std::string_view(body).substr(start, comma - start)), line_no));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

std::vector<double> json_data(const Json& doc, std::size_t expected) {
  if (!doc.is_object() || !doc.contains("data") || !doc["data"].is_array()) {
    throw IoError("JSON input needs a \"data\" array");
  }
  const auto& data = doc["data"];
  if (data.size() != expected) {
    throw IoError("JSON \"data\" has " + std::to_string(data.size()) + " entries, expected " +
                  std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : data) {
    if (!v.is_number()) throw IoError("JSON \"data\" entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t json_dim(const Json& doc) {
  if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    throw IoError("JSON input needs a positive integer \"dim\"");
  }
  return doc["dim"].get<std::size_t>();
}

void dump_into(std::string& out, const Json& value, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        dump_into(out, item, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(value.begin(), value.end(),
                                     [](const Json& v) { return v.is_structured(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump_into(out, item, depth + 1);
      }
      out += flat ? "]" : "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = value.get<double>();
      // JSON has no literal for non-finite numbers.
      out += std::isfinite(v) ? format_real(v) : "null";
      return;
    }
    default:
      out += value.dump();
  }
}

}  // namespace

MatrixFile parse_matrix_csv(const std::string& text) {
  const auto rows = parse_rows(text);
  if (rows.empty()) throw IoError("matrix file is empty");
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw IoError("matrix is not square: row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                    " entries, expected " + std::to_string(n));
    }
  }
  const auto d = static_cast<Eigen::Index>(n);
  MatrixFile file;
  file.matrix = Matrix(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      file.matrix(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return file;
}

MatrixFile parse_matrix_json(const std::string& text) {
  const Json doc = parse_json(text);
  const std::size_t n = json_dim(doc);
  const auto data = json_data(doc, n * n);
  const auto d = static_cast<Eigen::Index>(n);
  MatrixFile file;
  file.matrix = Matrix(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) file.matrix(i, j) = data[static_cast<std::size_t>(i * d + j)];
  }
  if (doc.contains("metzler")) {
    if (!doc["metzler"].is_boolean()) throw IoError("\"metzler\" must be a boolean");
    file.metzler = doc["metzler"].get<bool>();
  }
  return file;
}

MatrixFile read_matrix(const std::string& path) {
  const std::string text = slurp(path);
  return ends_with(path, ".json") ? parse_matrix_json(text) : parse_matrix_csv(text);
}

Vector parse_vector(const std::string& text) {
  const auto rows = parse_rows(text);
  std::vector<double> values;
  for (const auto& row : rows) values.insert(values.end(), row.begin(), row.end());
  if (values.empty()) throw IoError("vector is empty");
  // A column vector written one entry per line reads the same as a single row.
  if (rows.size() > 1 && std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.size() != 1; })) {
    throw IoError("vector file must be a single row or a single column");
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector read_vector(const std::string& path) {
  const std::string text = slurp(path);
  if (!ends_with(path, ".json")) return parse_vector(text);
  const Json doc = parse_json(text);
  const std::size_t n = json_dim(doc);
  const auto data = json_data(doc, n);
  return Eigen::Map<const Vector>(data.data(), static_cast<Eigen::Index>(n));
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_json(std::ostream& out, const Matrix& m) {
  Json doc;
  doc["dim"] = m.rows();
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  doc["data"] = std::move(data);
  out << dump(doc) << '\n';
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

std::string dump(const Json& value) {
  std::string out;
  dump_into(out, value, 0);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace posasym::io
