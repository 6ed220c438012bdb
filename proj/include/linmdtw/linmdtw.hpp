#pragma once

// Exact DTW alignment in linear memory by divide and conquer.
//
// A forward run over the first half of the anti-diagonals and a reverse run
// over the second half meet on three shared diagonals. For any cell there,
//     total(i,j) = D_forward(i,j) + D_backward(i,j) - C(i,j)
// is the cost of the best path forced through (i,j); every warping path
// touches one of three consecutive diagonals, so the minimum total equals the
// optimal cost and its argmin (the pivot) lies on an optimal path. The
// problem then splits at the pivot into two independent sub-blocks.

#include <cstdint>
#include <functional>
#include <vector>

#include "linmdtw/core.hpp"
#include "linmdtw/diag_engine.hpp"
#include "linmdtw/oracle.hpp"

namespace lmdtw {

/// Order in which cells with equal combined cost compete for the pivot.
enum class PivotTieRule {
  lowest_diagonal_first,   ///< lowest k, then lowest position
  highest_diagonal_first,  ///< highest k, then highest position
};

struct LinMdtwConfig {
  /// Sub-blocks with either side shorter than this are solved by dtw_full.
  std::size_t min_dim = 500;
  Precision precision = Precision::f64;
  TieRule tie_rule = TieRule::diag_left_up;
  PivotTieRule pivot_tie_rule = PivotTieRule::lowest_diagonal_first;
  /// Run the two recursive halves concurrently (each holds its own buffers).
  bool parallel_halves = false;
  ExecutionMode mode = ExecutionMode::parallel;
  std::size_t parallel_min_length = 512;
  /// Called with (cells_processed, 2*M*N).
  ProgressCounter::Callback progress;
};

struct Pivot {
  std::size_t i = 0;
  std::size_t j = 0;
  double total_at_pivot = 0.0;
  std::size_t diagonal_k = 0;
};

struct PivotSearch {
  Pivot pivot;
  std::uint64_t cells_processed = 0;
};

/// Pivot for the whole grid. Requires M+N-2 >= 2. When M+N-2 >= 3 the two
/// corner cells are never chosen (every path contains them, so they would not
/// split the problem).
PivotSearch find_pivot(SeriesView x, SeriesView y, const CostFunction& cost = {},
                       const LinMdtwConfig& cfg = {}, RetainedCounter* retained = nullptr);

/// Pivots in recursion order, in global coordinates; for tests and tracing.
using PivotTrace = std::vector<Pivot>;

AlignmentResult linmdtw(SeriesView x, SeriesView y, const CostFunction& cost = {},
                        const LinMdtwConfig& cfg = {}, PivotTrace* trace = nullptr);
AlignmentResult linmdtw(const FeatureSeries& x, const FeatureSeries& y,
                        const CostFunction& cost = {}, const LinMdtwConfig& cfg = {},
                        PivotTrace* trace = nullptr);

/// cells_processed / (M*N).
double cells_ratio(const AlignmentResult& result, std::size_t m, std::size_t n);

/// 2MN + (M+N) log2(M+N).
double cells_upper_bound(std::size_t m, std::size_t n);

}  // namespace lmdtw
