#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "amc/completion/dglr.hpp"

namespace amc::completion {

namespace detail {

// JSON has no NaN; unset fields become null.
inline nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline double num_or_nan(const nlohmann::json& j, const char* key) {
  return j.contains(key) && j[key].is_number() ? j[key].get<double>() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

inline nlohmann::json report_to_json(const CompletionReport& r) {
  return {{"m", r.x_star.rows()},
          {"n", r.x_star.cols()},
          {"residual", detail::num(r.residual)},
          {"cg_iterations", r.cg_iterations},
          {"lambda_min_est", detail::num(r.lambda_min_est)},
          {"lobpcg_iterations", r.lobpcg_iterations},
          {"rho", detail::num(r.rho)},
          {"bound", detail::num(r.bound)},
          {"actual_error", detail::num(r.actual_error)},
          {"rmse", detail::num(r.rmse)}};
}

// Scalar fields only; x_star is stored separately.
inline CompletionReport report_from_json(const nlohmann::json& j) {
  CompletionReport r;
  r.residual = detail::num_or_nan(j, "residual");
  r.cg_iterations = j.value("cg_iterations", std::size_t(0));
  r.lambda_min_est = detail::num_or_nan(j, "lambda_min_est");
  r.lobpcg_iterations = j.value("lobpcg_iterations", std::size_t(0));
  r.rho = detail::num_or_nan(j, "rho");
  r.bound = detail::num_or_nan(j, "bound");
  r.actual_error = detail::num_or_nan(j, "actual_error");
  r.rmse = detail::num_or_nan(j, "rmse");
  return r;
}

inline void save_report(const std::string& path, const CompletionReport& r) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << report_to_json(r).dump(2) << '\n';
}

// Dense matrix as CSV, one matrix row per line, no header.
inline void write_matrix_csv(std::ostream& out, const DenseMatrix& x) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << (j ? "," : "") << x(i, j);
    out << '\n';
  }
}

inline DenseMatrix read_matrix_csv(std::istream& in, const std::string& source = "<stream>") {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(source, lineno, "bad number `" + cell + "`");
      }
    }
    if (!rows.empty() && row.size() != rows[0].size()) throw ParseError(source, lineno, "ragged row");
    rows.push_back(std::move(row));
  }
  DenseMatrix x(Eigen::Index(rows.size()), Eigen::Index(rows.empty() ? 0 : rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) x(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
  return x;
}

inline void save_matrix_csv(const std::string& path, const DenseMatrix& x) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_matrix_csv(out, x);
}

inline DenseMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read_matrix_csv(in, path);
}

}  // namespace amc::completion
