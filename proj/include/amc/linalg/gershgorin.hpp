#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "amc/linalg/sparse.hpp"

namespace amc::linalg {

/// Gershgorin disc of one row: every eigenvalue lies in the union of
/// [center - radius, center + radius] over all rows.
struct DiscBound {
  double center = 0.0;
  double radius = 0.0;
  double left = 0.0;
  double right = 0.0;
};

inline std::vector<DiscBound> gershgorin_bounds(const SparseSym& a) {
  std::vector<DiscBound> discs(a.dim());
  const auto& off = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  for (Index i = 0; i < a.dim(); ++i) {
    double center = 0.0, radius = 0.0;
    for (Index k = off[i]; k < off[i + 1]; ++k) {
      if (cols[k] == i)
        center = vals[k];
      else
        radius += std::abs(vals[k]);
    }
    discs[i] = {center, radius, center - radius, center + radius};
  }
  return discs;
}

// Lower bound on lambda_min: smallest left end over all discs.
inline double gershgorin_lower_bound(const std::vector<DiscBound>& discs) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& d : discs) lo = std::min(lo, d.left);
  return lo;
}

inline double gershgorin_upper_bound(const std::vector<DiscBound>& discs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& d : discs) hi = std::max(hi, d.right);
  return hi;
}

}  // namespace amc::linalg
