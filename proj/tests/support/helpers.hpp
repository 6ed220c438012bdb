#pragma once

// Shared fixtures: seeded random series and a plain full-table DTW written
// independently of the library kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "linmdtw/core.hpp"

namespace lmdtw::testing {

inline FeatureSeries random_series(std::mt19937_64& rng, std::size_t length, std::size_t dim) {
  std::uniform_real_distribution<float> u(-1.0F, 1.0F);
  std::vector<float> v(length * dim);
  for (auto& x : v) x = u(rng);
  return FeatureSeries(std::move(v), dim);
}

/// Small non-negative integers: 1-D Euclidean costs are then exact integers
/// and ties between paths are common.
inline FeatureSeries integer_series(std::mt19937_64& rng, std::size_t length, int hi = 3) {
  std::uniform_int_distribution<int> u(0, hi);
  std::vector<float> v(length);
  for (auto& x : v) x = static_cast<float>(u(rng));
  return FeatureSeries(std::move(v), 1);
}

inline double frame_distance(const FeatureSeries& x, std::size_t i, const FeatureSeries& y,
                             std::size_t j) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.dim(); ++d) {
    const double diff = static_cast<double>(x.frame(i)[d]) - static_cast<double>(y.frame(j)[d]);
    s += diff * diff;
  }
  return std::sqrt(s);
}

/// Full table, row-major; used only as a reference.
inline std::vector<double> reference_table(const FeatureSeries& x, const FeatureSeries& y) {
  const std::size_t m = x.length();
  const std::size_t n = y.length();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(m * n, inf);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double best = 0.0;
      if (i > 0 || j > 0) {
        best = inf;
        if (j > 0) best = std::min(best, d[i * n + j - 1]);
        if (i > 0) best = std::min(best, d[(i - 1) * n + j]);
        if (i > 0 && j > 0) best = std::min(best, d[(i - 1) * n + j - 1]);
      }
      d[i * n + j] = best + frame_distance(x, i, y, j);
    }
  }
  return d;
}

inline double reference_cost(const FeatureSeries& x, const FeatureSeries& y) {
  return reference_table(x, y).back();
}

inline WarpingPath diagonal_path(std::size_t n) {
  WarpingPath p;
  for (std::size_t k = 0; k < n; ++k) p.push_back({k, k});
  return p;
}

}  // namespace lmdtw::testing
