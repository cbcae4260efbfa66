#pragma once

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "amc/sampling/sample_set.hpp"

namespace amc::sampling {

struct SampleMeta {
  std::string method;
  Index k = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double q = 0.0;
  Index zeta = 0;
  std::vector<std::size_t> iter_counts;
  double wall_time_seconds = 0.0;
  Index m = 0;
  Index n = 0;
};

inline nlohmann::json to_json(const SampleMeta& s) {
  return {{"method", s.method}, {"K", s.k},         {"seed", s.seed},
          {"alpha", s.alpha},   {"beta", s.beta},   {"q", s.q},
          {"zeta", s.zeta},     {"iter_counts", s.iter_counts},
          {"wall_time_seconds", s.wall_time_seconds}, {"m", s.m}, {"n", s.n}};
}

inline SampleMeta sample_meta_from_json(const nlohmann::json& j) {
  SampleMeta s;
  s.method = j.value("method", "");
  s.k = j.value("K", Index(0));
  s.seed = j.value("seed", std::uint64_t(0));
  s.alpha = j.value("alpha", 0.0);
  s.beta = j.value("beta", 0.0);
  s.q = j.value("q", 0.0);
  s.zeta = j.value("zeta", Index(0));
  s.iter_counts = j.value("iter_counts", std::vector<std::size_t>{});
  s.wall_time_seconds = j.value("wall_time_seconds", 0.0);
  s.m = j.value("m", Index(0));
  s.n = j.value("n", Index(0));
  return s;
}

// CSV `row,col` (0-based) in selection order, with a header line.
inline void write_sample_csv(std::ostream& out, const SampleSet& s) {
  out << "row,col\n";
  for (const auto& [i, j] : s.pairs()) out << i << ',' << j << '\n';
}

inline SampleSet read_sample_csv(std::istream& in, Index m, Index n, const std::string& source = "<stream>") {
  std::vector<std::pair<Index, Index>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("row", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    long long i = -1, j = -1;
    std::string rest;
    if (!(ls >> i >> j) || (ls >> rest) || i < 0 || j < 0)
      throw ParseError(source, lineno, "expected `row,col` with nonnegative indices");
    pairs.emplace_back(Index(i), Index(j));
  }
  SampleSet s(m, n, pairs.size());
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    try {
      s.add(pairs[t].first, pairs[t].second);
    } catch (const Error& e) {
      throw ParseError(source, 0, e.what());
    }
  }
  return s;
}

/// Writes `path` (CSV) and `path.json` (metadata sidecar).
inline void save_sample_set(const std::string& path, const SampleSet& s, const SampleMeta& meta) {
  std::ofstream csv(path);
  if (!csv) throw Error("cannot write " + path);
  write_sample_csv(csv, s);
  std::ofstream js(path + ".json");
  if (!js) throw Error("cannot write " + path + ".json");
  SampleMeta m = meta;
  m.m = s.m();
  m.n = s.n();
  js << to_json(m).dump(2) << '\n';
}

inline SampleSet load_sample_set(const std::string& path, Index m, Index n) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read_sample_csv(in, m, n, path);
}

inline SampleMeta load_sample_meta(const std::string& path) {
  std::ifstream in(path + ".json");
  if (!in) throw Error("cannot read " + path + ".json");
  try {
    return sample_meta_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ".json", 0, e.what());
  }
}

}  // namespace amc::sampling
