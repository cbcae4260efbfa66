#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "amc/error.hpp"
#include "amc/experiments/ratings_io.hpp"

namespace amc::experiments {

inline constexpr const char* kMetricsHeader = "method,seed,K,rmse,lambda_min_est,wall_time_seconds,lobpcg_total_iters";

struct MetricsRow {
  std::string method;
  std::uint64_t seed = 0;
  Index k = 0;
  double rmse = 0.0;
  double lambda_min_est = 0.0;
  double wall_time_seconds = 0.0;
  std::size_t lobpcg_total_iters = 0;

  bool operator==(const MetricsRow&) const = default;
};

// A cell that raised; kept out of the metrics table.
struct FailureRow {
  std::string method;
  std::uint64_t seed = 0;
  Index k = 0;
  std::string error;
};

inline auto metrics_key(const MetricsRow& r) { return std::tie(r.method, r.seed, r.k); }

inline void write_metrics(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    if (r.method.find_first_of(",\n\"") != std::string::npos)
      throw InvalidArgument("export_metrics: method label `" + r.method + "` contains a CSV delimiter");
    out << r.method << ',' << r.seed << ',' << r.k << ',' << r.rmse << ',' << r.lambda_min_est << ','
        << r.wall_time_seconds << ',' << r.lobpcg_total_iters << '\n';
  }
}

inline void export_metrics(const std::vector<MetricsRow>& rows, const std::string& path) {
  if (rows.empty()) throw InvalidArgument("export_metrics: no rows");
  std::ofstream out(path);
  if (!out) throw Error("export_metrics: cannot write " + path);
  write_metrics(out, rows);
  if (!out) throw Error("export_metrics: write failed for " + path);
}

inline std::vector<MetricsRow> read_metrics(std::istream& in, const std::string& source = "<stream>") {
  std::vector<MetricsRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (lineno == 1) {
      if (t != kMetricsHeader) throw ParseError(source, lineno, "unexpected metrics header");
      continue;
    }
    if (t.empty()) continue;
    std::vector<std::string> c;
    std::stringstream ls(t);
    std::string cell;
    while (std::getline(ls, cell, ',')) c.push_back(cell);
    if (c.size() != 7) throw ParseError(source, lineno, "expected 7 columns");
    const auto seed = detail::parse_int(c[1]), k = detail::parse_int(c[2]), it = detail::parse_int(c[6]);
    const auto rmse = detail::parse_double(c[3]), lam = detail::parse_double(c[4]),
               wall = detail::parse_double(c[5]);
    if (!seed || !k || !it || !rmse || !lam || !wall || *seed < 0 || *k < 0 || *it < 0)
      throw ParseError(source, lineno, "bad metrics row");
    rows.push_back({c[0], std::uint64_t(*seed), Index(*k), *rmse, *lam, *wall, std::size_t(*it)});
  }
  if (lineno == 0) throw ParseError(source, 1, "empty metrics file");
  return rows;
}

inline std::vector<MetricsRow> load_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read_metrics(in, path);
}

inline void write_failures(std::ostream& out, const std::vector<FailureRow>& rows) {
  out << "method,seed,K,error\n";
  for (const auto& r : rows) {
    std::string msg = r.error;
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::string quoted;
    for (char ch : msg) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    out << r.method << ',' << r.seed << ',' << r.k << ",\"" << quoted << "\"\n";
  }
}

}  // namespace amc::experiments
