#pragma once

#include <string>
#include <utility>

#include "amc/linalg/types.hpp"

namespace amc::graphs {

// Column-major, 0-based: entry (i, j) of an m-row matrix sits at i + m * j of
// vec(X).
inline linalg::Index lin_index(linalg::Index i, linalg::Index j, linalg::Index m, linalg::Index n) {
  if (i >= m || j >= n)
    throw DimensionError("lin_index: (" + std::to_string(i) + "," + std::to_string(j) +
                         ") outside " + std::to_string(m) + "x" + std::to_string(n));
  return i + m * j;
}

inline std::pair<linalg::Index, linalg::Index> mat_index(linalg::Index l, linalg::Index m,
                                                         linalg::Index n) {
  if (m == 0 || l >= m * n)
    throw DimensionError("mat_index: linear index " + std::to_string(l) + " outside " +
                         std::to_string(m) + "x" + std::to_string(n));
  return {l % m, l / m};
}

}  // namespace amc::graphs
