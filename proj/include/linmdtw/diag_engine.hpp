#pragma once

// Anti-diagonal DTW cost engine holding three diagonals at a time.
//
// Diagonal k holds the cells with i + j == k. Cells on a diagonal are ordered
// by increasing j, so position idx maps to
//     i = min(k, M-1) - idx,  j = k - i.
// Every cell of diagonal k depends only on diagonals k-1 and k-2, which makes
// the update of one diagonal data-parallel.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "linmdtw/core.hpp"

namespace lmdtw {

enum class Direction { forward, reverse };

/// How cells inside one diagonal are updated.
enum class ExecutionMode {
  sequential,  ///< serial reference kernel
  parallel,    ///< OpenMP parallel-for over the diagonal
};

struct DiagAddress {
  std::size_t k = 0;
  std::size_t idx = 0;
};

/// Number of cells on diagonal k of an M x N grid.
std::size_t diag_length(std::size_t k, std::size_t m, std::size_t n);

/// Column of the first (idx = 0) cell on diagonal k.
inline std::size_t diag_first_col(std::size_t k, std::size_t m) noexcept {
  return k >= m ? k - (m - 1) : 0;
}

Cell diag_to_grid(DiagAddress addr, std::size_t m, std::size_t n);
DiagAddress grid_to_diag(Cell cell, std::size_t m, std::size_t n);

/// Sink for the monotone cells-processed counter. `add` may be called from
/// concurrent alignment branches.
class ProgressCounter {
 public:
  using Callback = std::function<void(std::uint64_t processed, std::uint64_t total)>;

  ProgressCounter() = default;
  /// The callback fires whenever the counter has advanced by at least
  /// `step` cells since it last fired, and on every flush().
  ProgressCounter(std::uint64_t total, Callback cb, std::uint64_t step = 0);

  void add(std::uint64_t cells);
  /// Marks a completed batch of diagonals (or a base-case solve).
  void flush();
  std::uint64_t processed() const noexcept { return processed_.load(std::memory_order_relaxed); }
  std::uint64_t total() const noexcept { return total_; }

 private:
  std::atomic<std::uint64_t> processed_{0};
  std::atomic<std::uint64_t> next_report_{0};
  std::uint64_t total_ = 0;
  std::uint64_t step_ = 0;
  Callback cb_;
};

/// Three consecutive anti-diagonals of accumulated cost (d) and, optionally,
/// raw cost (c). Slot 0 holds diagonal k_current-2, slot 1 k_current-1 and
/// slot 2 k_current. Coordinates are those of the oriented problem: for a
/// reverse run, cell (i, j) refers to (M-1-i, N-1-j) of the original grid.
template <class T>
struct DiagBufferSet {
  std::array<std::vector<T>, 3> d;
  std::array<std::vector<T>, 3> c;  // empty when raw costs were not retained
  std::size_t k_current = 0;
  Direction direction = Direction::forward;
  std::size_t rows = 0;
  std::size_t cols = 0;
  RetainedLease lease;

  std::size_t diagonal(std::size_t slot) const noexcept { return k_current - 2 + slot; }
  std::size_t length(std::size_t slot) const noexcept {
    return diag_length(diagonal(slot), rows, cols);
  }
  bool has_raw() const noexcept { return !c[0].empty(); }
  /// Cell of the oriented grid for a slot position.
  Cell oriented_cell(std::size_t slot, std::size_t idx) const {
    return diag_to_grid({diagonal(slot), idx}, rows, cols);
  }
  /// Cell of the original (forward) grid for a slot position.
  Cell original_cell(std::size_t slot, std::size_t idx) const {
    Cell c0 = oriented_cell(slot, idx);
    if (direction == Direction::reverse) c0 = {rows - 1 - c0.i, cols - 1 - c0.j};
    return c0;
  }
  /// Releases the raw-cost buffers (and their share of the lease).
  void drop_raw() {
    std::uint64_t freed = 0;
    for (auto& buf : c) {
      freed += buf.size();
      std::vector<T>().swap(buf);
    }
    lease.shrink(freed);
  }
};

struct DiagRunOptions {
  Direction direction = Direction::forward;
  ExecutionMode mode = ExecutionMode::parallel;
  bool retain_raw = true;
  /// Diagonals shorter than this are updated serially even in parallel mode.
  std::size_t parallel_min_length = 512;
  RetainedCounter* retained = nullptr;
  ProgressCounter* progress = nullptr;
};

template <class T>
struct DiagRunResult {
  DiagBufferSet<T> buffers;
  std::uint64_t cells_processed = 0;
};

/// Fills diagonals 0..kstop inclusive and returns the last three.
/// Requires 2 <= kstop <= M+N-2.
template <class T>
DiagRunResult<T> diag_dtw(SeriesView x, SeriesView y, const CostFunction& cost, std::size_t kstop,
                          const DiagRunOptions& opts = {});

namespace detail {

/// Oriented view of the two series: reverse runs read frames back to front.
struct OrientedPair {
  SeriesView x;
  SeriesView y;
  bool reverse = false;

  const float* xrow(std::size_t i) const noexcept {
    return x.row(reverse ? x.length() - 1 - i : i);
  }
  const float* yrow(std::size_t j) const noexcept {
    return y.row(reverse ? y.length() - 1 - j : j);
  }
};

/// Update of diagonal k (k >= 2) from diagonals k-1 (prev1) and k-2 (prev2).
/// Visits positions in `order`; every position is independent of the others.
template <class T>
void update_diagonal_ordered(const OrientedPair& p, const CostFunction& cost, std::size_t k,
                             std::span<const T> prev2, std::span<const T> prev1,
                             std::span<T> out_d, std::span<T> out_c,
                             std::span<const std::size_t> order);

}  // namespace detail

}  // namespace lmdtw
