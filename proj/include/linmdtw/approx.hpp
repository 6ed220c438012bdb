#pragma once

// Approximate multiresolution baselines: FastDTW (band radius) and a
// memory-restricted multiscale DTW with a constant cell budget.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "linmdtw/core.hpp"
#include "linmdtw/oracle.hpp"

namespace lmdtw {

/// Per-row inclusive column intervals of an M x N grid.
struct Window {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::pair<std::size_t, std::size_t>> span;  // [lo, hi] per row

  std::uint64_t cell_count() const;
  bool contains(std::size_t i, std::size_t j) const {
    return i < rows && span[i].first <= j && j <= span[i].second;
  }
  static Window full(std::size_t m, std::size_t n);
};

/// Empty when the window is non-empty per row, in range, monotone, connected
/// and contains both corners.
std::vector<std::string> validate_window(const Window& w);

/// Pairwise means of adjacent frames; an odd trailing frame is dropped.
FeatureSeries coarsen(const FeatureSeries& x);

/// Projects a half-resolution path onto 2x2 blocks of an M x N grid, dilates
/// by `radius` cells in both directions, clips and monotonises.
Window expand_window(const WarpingPath& coarse_path, std::size_t radius, std::size_t m,
                     std::size_t n);

struct WindowedOptions {
  TieRule tie_rule = TieRule::diag_left_up;
  Precision precision = Precision::f64;
  RetainedCounter* retained = nullptr;
};

/// Best path restricted to the window. Only in-window cells are evaluated
/// or stored.
AlignmentResult constrained_dtw(SeriesView x, SeriesView y, const CostFunction& cost,
                                const Window& window, const WindowedOptions& opts = {});
AlignmentResult constrained_dtw(const FeatureSeries& x, const FeatureSeries& y,
                                const CostFunction& cost, const Window& window,
                                const WindowedOptions& opts = {});

struct FastDtwOptions {
  std::size_t radius = 30;
  TieRule tie_rule = TieRule::diag_left_up;
  Precision precision = Precision::f64;
};

AlignmentResult fastdtw(const FeatureSeries& x, const FeatureSeries& y, const CostFunction& cost,
                        const FastDtwOptions& opts = {});

struct CellBudget {
  static constexpr std::uint64_t kFloor = 100;
  std::uint64_t max_cells = 100000;
};

struct MrMsDtwOptions {
  CellBudget budget;
  /// Share of the budget for the coarsest exact solve; the rest bounds each
  /// refinement block.
  double coarse_fraction = 0.5;
  /// Dilation (in cells) around the projected path during refinement.
  std::size_t refine_radius = 1;
  TieRule tie_rule = TieRule::diag_left_up;
  Precision precision = Precision::f64;
};

/// Multiscale DTW whose live DP cells never exceed the budget. With a budget
/// of at least M*N the result is exact.
AlignmentResult mrmsdtw(const FeatureSeries& x, const FeatureSeries& y, const CostFunction& cost,
                        const MrMsDtwOptions& opts = {});

namespace detail {
/// Fills empty rows, forces the corners in, then makes both bounds
/// non-decreasing and consecutive rows connected.
void normalize_window(Window& w);
/// ceil(M/2) frames; the last one averages whatever is left.
FeatureSeries halve_keep_tail(const FeatureSeries& x);
}  // namespace detail

}  // namespace lmdtw
