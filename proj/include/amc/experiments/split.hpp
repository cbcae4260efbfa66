#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "amc/experiments/config.hpp"
#include "amc/graphs/rating.hpp"

namespace amc::experiments {

/// Disjoint partition of the known entries (linear indices, ascending).
struct DatasetSplit {
  std::vector<Index> initial;  // Gamma: observed before sampling
  std::vector<Index> pool;     // sampler candidates
  std::vector<Index> eval;     // scored only
};

/// Sizes are llround(f * N) for N known entries; entries left over belong to
/// no part.
inline DatasetSplit split_dataset(const graphs::RatingMatrix& data, const SplitFractions& f, std::uint64_t seed) {
  const auto frac = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!frac(f.initial) || !frac(f.pool) || !frac(f.eval))
    throw InvalidArgument("split_dataset: fractions must lie in [0,1]");
  std::vector<Index> idx = data.known_indices();
  const std::size_t total = idx.size();
  const auto size_of = [&](double x) { return std::size_t(std::llround(x * double(total))); };
  const std::size_t a = size_of(f.initial), b = size_of(f.pool), c = size_of(f.eval);
  if (a + b + c > total)
    throw InvalidArgument("split_dataset: fractions need " + std::to_string(a + b + c) + " entries, only " +
                          std::to_string(total) + " known");
  std::sort(idx.begin(), idx.end());
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates over the first a + b + c slots.
  for (std::size_t t = 0; t < a + b + c; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, total - 1);
    std::swap(idx[t], idx[pick(rng)]);
  }
  DatasetSplit s;
  s.initial.assign(idx.begin(), idx.begin() + long(a));
  s.pool.assign(idx.begin() + long(a), idx.begin() + long(a + b));
  s.eval.assign(idx.begin() + long(a + b), idx.begin() + long(a + b + c));
  for (auto* part : {&s.initial, &s.pool, &s.eval}) std::sort(part->begin(), part->end());
  return s;
}

/// Ratings restricted to the listed linear indices.
inline graphs::RatingMatrix restrict_ratings(const graphs::RatingMatrix& data, const std::vector<Index>& idx) {
  graphs::RatingMatrix out(data.m(), data.n());
  for (Index l : idx) {
    const auto [i, j] = graphs::mat_index(l, data.m(), data.n());
    out.add(i, j, data.value(i, j));
  }
  return out;
}

}  // namespace amc::experiments
