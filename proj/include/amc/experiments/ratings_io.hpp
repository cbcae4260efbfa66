#pragma once

#include <charconv>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include "amc/error.hpp"
#include "amc/graphs/rating.hpp"

namespace amc::experiments {

using graphs::RatingMatrix;
using linalg::Index;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<long long> parse_int(const std::string& s) {
  long long v = 0;
  const auto t = trim(s);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) return std::nullopt;
  return v;
}

inline std::optional<double> parse_double(const std::string& s) {
  const auto t = trim(s);
  if (t.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// `# m=<rows> n=<cols>`; other comments are ignored.
inline bool parse_dims(const std::string& line, std::optional<Index>& m, std::optional<Index>& n) {
  std::stringstream ss(line.substr(1));
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const auto key = tok.substr(0, eq);
    const auto v = parse_int(tok.substr(eq + 1));
    if (key != "m" && key != "n") continue;
    if (!v || *v < 0) return false;
    (key == "m" ? m : n) = Index(*v);
  }
  return true;
}

}  // namespace detail

/// Ratings as CSV triplets `row,col,value` (0-based). Optional `row,col,value`
/// header; a `# m=.. n=..` comment fixes the dimensions, otherwise they are
/// inferred from the largest indices.
inline RatingMatrix read_ratings(std::istream& in, const std::string& source = "<stream>") {
  struct Raw {
    Index i, j;
    double v;
    std::size_t line;
  };
  std::vector<Raw> raw;
  std::optional<Index> m, n;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      if (!detail::parse_dims(t, m, n)) throw ParseError(source, lineno, "bad dimension directive");
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(t);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(detail::trim(cell));
    if (raw.empty() && cells.size() == 3 && cells[0] == "row" && cells[1] == "col" && cells[2] == "value") continue;
    if (cells.size() != 3) throw ParseError(source, lineno, "expected `row,col,value`");
    const auto i = detail::parse_int(cells[0]), j = detail::parse_int(cells[1]);
    const auto v = detail::parse_double(cells[2]);
    if (!i || !j || *i < 0 || *j < 0) throw ParseError(source, lineno, "bad index");
    if (!v || !std::isfinite(*v)) throw ParseError(source, lineno, "bad value `" + cells[2] + "`");
    raw.push_back({Index(*i), Index(*j), *v, lineno});
  }
  Index rows = m.value_or(0), cols = n.value_or(0);
  for (const auto& r : raw) {
    if (m && r.i >= *m) throw ParseError(source, r.line, "row index out of range (m=" + std::to_string(*m) + ")");
    if (n && r.j >= *n) throw ParseError(source, r.line, "column index out of range (n=" + std::to_string(*n) + ")");
    if (!m) rows = std::max(rows, r.i + 1);
    if (!n) cols = std::max(cols, r.j + 1);
  }
  RatingMatrix out(rows, cols);
  for (const auto& r : raw) {
    if (out.known(r.i, r.j))
      throw ParseError(source, r.line,
                       "duplicate entry (" + std::to_string(r.i) + "," + std::to_string(r.j) + ")");
    out.add(r.i, r.j, r.v);
  }
  return out;
}

inline void write_ratings(std::ostream& out, const RatingMatrix& r) {
  out << "# m=" << r.m() << " n=" << r.n() << '\n' << "row,col,value\n" << std::setprecision(17);
  for (const auto& e : r.entries()) out << e.row << ',' << e.col << ',' << e.value << '\n';
}

inline RatingMatrix load_ratings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read_ratings(in, path);
}

inline void save_ratings(const std::string& path, const RatingMatrix& r) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_ratings(out, r);
}

}  // namespace amc::experiments
