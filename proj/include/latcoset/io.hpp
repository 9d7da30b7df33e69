#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "latcoset/error.hpp"
#include "latcoset/integer_matrix.hpp"
#include "latcoset/lattice.hpp"

namespace latcoset::io {

namespace detail {

[[noreturn]] inline void fail(std::string_view source, std::size_t line, const std::string& reason) {
  throw Error(ErrorKind::parse_error, std::string(source) + ":" + std::to_string(line) + ": " + reason);
}

inline bool parse_real(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

inline bool parse_int(std::string_view s, std::int64_t& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct Token {
  std::string text;
  std::size_t line;
};

/// Splits into whitespace-separated tokens per line; '#' starts a comment.
inline std::vector<std::vector<Token>> tokenize_lines(std::istream& in) {
  std::vector<std::vector<Token>> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<Token> row;
    std::string tok;
    while (ls >> tok) row.push_back(Token{tok, number});
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

inline std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open '" + path + "'");
  return in;
}

}  // namespace detail

/// Decimal ("0.5", "-1e-3") or rational ("1/2", "-3/4") entry.
inline bool parse_number(std::string_view token, double& out) {
  if (auto slash = token.find('/'); slash != std::string_view::npos) {
    double num = 0.0, den = 0.0;
    if (!detail::parse_real(token.substr(0, slash), num) || !detail::parse_real(token.substr(slash + 1), den)) {
      return false;
    }
    if (den == 0.0) return false;
    out = num / den;
    return true;
  }
  return detail::parse_real(token, out);
}

/// One matrix row per line, entries separated by whitespace.
inline Eigen::MatrixXd read_matrix(std::istream& in, std::string_view source) {
  const auto rows = detail::tokenize_lines(in);
  if (rows.empty()) detail::fail(source, 1, "no matrix rows");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      detail::fail(source, rows[i].front().line,
                   "expected " + std::to_string(cols) + " entries, found " + std::to_string(rows[i].size()));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      double v = 0.0;
      if (!parse_number(rows[i][j].text, v)) {
        detail::fail(source, rows[i][j].line, "invalid number '" + rows[i][j].text + "'");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  if (m.rows() != m.cols()) {
    detail::fail(source, rows.back().front().line,
                 "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected square");
  }
  return m;
}

inline IntMatrix read_integer_matrix(std::istream& in, std::string_view source) {
  const auto rows = detail::tokenize_lines(in);
  if (rows.empty()) detail::fail(source, 1, "no matrix rows");
  const std::size_t cols = rows.front().size();
  IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      detail::fail(source, rows[i].front().line,
                   "expected " + std::to_string(cols) + " entries, found " + std::to_string(rows[i].size()));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      std::int64_t v = 0;
      if (!detail::parse_int(rows[i][j].text, v)) {
        detail::fail(source, rows[i][j].line, "invalid integer '" + rows[i][j].text + "'");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  if (m.rows() != m.cols()) {
    detail::fail(source, rows.back().front().line, "relation matrix must be square");
  }
  return m;
}

/// n, then n diagonal entries, then n(n-1)/2 strict upper entries in row-major order.
inline SkewingSpec read_skew_spec(std::istream& in, std::string_view source) {
  std::vector<detail::Token> tokens;
  for (auto& row : detail::tokenize_lines(in)) {
    for (auto& t : row) tokens.push_back(std::move(t));
  }
  if (tokens.empty()) detail::fail(source, 1, "empty skew specification");
  std::int64_t n = 0;
  if (!detail::parse_int(tokens[0].text, n) || n < 1) {
    detail::fail(source, tokens[0].line, "first entry must be a positive dimension");
  }
  const std::size_t expected = 1 + static_cast<std::size_t>(n) + static_cast<std::size_t>(n * (n - 1) / 2);
  if (tokens.size() != expected) {
    detail::fail(source, tokens.back().line,
                 "expected " + std::to_string(expected - 1) + " entries after n, found " +
                     std::to_string(tokens.size() - 1));
  }
  std::vector<double> values;
  for (std::size_t k = 1; k < tokens.size(); ++k) {
    double v = 0.0;
    if (!parse_number(tokens[k].text, v)) detail::fail(source, tokens[k].line, "invalid number '" + tokens[k].text + "'");
    if (k <= static_cast<std::size_t>(n) && !(v > 0.0)) {
      detail::fail(source, tokens[k].line, "diagonal entries must be positive");
    }
    values.push_back(v);
  }
  Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(values.data(), n);
  Eigen::VectorXd upper = Eigen::Map<Eigen::VectorXd>(values.data() + n, n * (n - 1) / 2);
  return SkewingSpec(diag, upper);
}

inline Eigen::MatrixXd read_matrix_file(const std::string& path) {
  auto in = detail::open(path);
  return read_matrix(in, path);
}

inline IntMatrix read_integer_matrix_file(const std::string& path) {
  auto in = detail::open(path);
  return read_integer_matrix(in, path);
}

inline SkewingSpec read_skew_spec_file(const std::string& path) {
  auto in = detail::open(path);
  return read_skew_spec(in, path);
}

/// Writes a matrix in the lattice file format, 17 significant digits per entry.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_double(m(i, j));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Grids

struct GridSpec {
  double min = 1.0;
  double max = 1.0;
  std::size_t count = 1;
  bool log_spaced = false;
};

/// "min:max:count:linear|log", or a single number for a one-point grid.
inline GridSpec parse_grid(std::string_view text) {
  auto bad = [&](const std::string& why) -> GridSpec {
    throw Error(ErrorKind::parse_error, "grid '" + std::string(text) + "': " + why);
  };
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  GridSpec g;
  if (parts.size() == 1) {
    if (!parse_number(parts[0], g.min)) return bad("invalid number");
    g.max = g.min;
  } else if (parts.size() == 4) {
    std::int64_t count = 0;
    if (!parse_number(parts[0], g.min) || !parse_number(parts[1], g.max)) return bad("invalid bounds");
    if (!detail::parse_int(parts[2], count) || count < 1) return bad("count must be a positive integer");
    g.count = static_cast<std::size_t>(count);
    if (parts[3] == "log") {
      g.log_spaced = true;
    } else if (parts[3] != "linear") {
      return bad("spacing must be 'linear' or 'log'");
    }
  } else {
    return bad("expected min:max:count:linear|log");
  }
  if (!(g.min > 0.0)) return bad("min must be positive");
  if (g.max < g.min) return bad("max must not be below min");
  return g;
}

inline std::vector<double> grid_values(const GridSpec& g) {
  std::vector<double> v;
  v.reserve(g.count);
  if (g.count == 1) {
    v.push_back(g.min);
    return v;
  }
  const double steps = static_cast<double>(g.count - 1);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double t = static_cast<double>(i) / steps;
    if (g.log_spaced) {
      v.push_back(std::exp(std::log(g.min) + t * (std::log(g.max) - std::log(g.min))));
    } else {
      v.push_back(g.min + t * (g.max - g.min));
    }
  }
  v.front() = g.min;
  v.back() = g.max;
  return v;
}

// ---------------------------------------------------------------------------
// CSV: header line, comma separated, 17 significant digits, LF line endings.

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { write_fields(header); }

  template <class... Fields>
  void row(const Fields&... fields) {
    std::vector<std::string> cells{cell(fields)...};
    write_fields(cells);
  }

  const std::string& str() const noexcept { return text_; }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(bool v) { return v ? "true" : "false"; }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(std::int64_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(std::string_view v) { return std::string(v); }
  static std::string cell(const char* v) { return v; }

  void write_fields(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) text_ += ',';
      text_ += fields[i];
    }
    text_ += '\n';
  }

  std::string text_;
};

}  // namespace latcoset::io
