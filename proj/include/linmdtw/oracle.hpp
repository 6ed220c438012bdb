#pragma once

// Quadratic-memory reference DTW. Ground truth for the rest of the library
// and the base-case solver of the divide-and-conquer aligner.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "linmdtw/core.hpp"

namespace lmdtw {

enum class Move : std::uint8_t { left = 0, up = 1, diag = 2 };

/// Precedence among moves whose accumulated costs are exactly equal.
/// LEFT is (i, j-1), UP is (i-1, j), DIAG is (i-1, j-1).
enum class TieRule { diag_left_up, left_diag_up, up_diag_left };

std::string to_string(TieRule r);
TieRule parse_tie_rule(const std::string& s);

/// M x N grid of moves packed four to a byte.
class BackpointerGrid {
 public:
  BackpointerGrid(std::size_t m, std::size_t n);

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }

  void set(std::size_t i, std::size_t j, Move mv) noexcept {
    const std::size_t k = i * n_ + j;
    auto& byte = bits_[k >> 2];
    const unsigned shift = static_cast<unsigned>(k & 3U) * 2U;
    byte = static_cast<std::uint8_t>((byte & ~(3U << shift)) | (static_cast<unsigned>(mv) << shift));
  }
  Move get(std::size_t i, std::size_t j) const noexcept {
    const std::size_t k = i * n_ + j;
    return static_cast<Move>((bits_[k >> 2] >> ((k & 3U) * 2U)) & 3U);
  }

  /// Follows moves from (M-1, N-1) back to (0, 0); returned in forward order.
  WarpingPath backtrace() const;

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<std::uint8_t> bits_;
};

struct OracleOptions {
  TieRule tie_rule = TieRule::diag_left_up;
  Precision precision = Precision::f64;
  /// Refuse (ResourceError) when the backpointer grid would exceed this.
  std::uint64_t max_backpointer_bytes = std::uint64_t{8} << 30;
  RetainedCounter* retained = nullptr;
};

/// Textbook DTW with full backpointers. Accumulated costs are kept in two
/// rolling lines along the shorter series, so retained values are
/// 2*min(M,N); the backpointer grid is M*N 2-bit codes.
AlignmentResult dtw_full(SeriesView x, SeriesView y, const CostFunction& cost = {},
                         const OracleOptions& opts = {});
AlignmentResult dtw_full(const FeatureSeries& x, const FeatureSeries& y,
                         const CostFunction& cost = {}, const OracleOptions& opts = {});

/// The whole accumulated cost table D, row-major M x N. Test oracle only.
template <class T>
std::vector<T> accumulated_cost_matrix(SeriesView x, SeriesView y, const CostFunction& cost = {});

struct BruteForceResult {
  double cost = 0.0;
  std::uint64_t optimal_path_count = 0;
  /// Up to the requested cap, in enumeration order.
  std::vector<WarpingPath> optimal_paths;
  /// M*N row-major flags: cell lies on at least one optimal path.
  std::vector<bool> optimal_cells;
  std::size_t rows = 0;
  std::size_t cols = 0;

  bool on_optimal_path(std::size_t i, std::size_t j) const { return optimal_cells[i * cols + j]; }
};

inline constexpr std::size_t kBruteForceMaxCells = 144;

/// Exhaustive search over every warping path (64-bit sums in path order).
/// Refuses grids larger than kBruteForceMaxCells.
BruteForceResult dtw_brute_enumerate(SeriesView x, SeriesView y, const CostFunction& cost = {},
                                     std::size_t max_stored_paths = 1024);

namespace detail {
std::array<Move, 3> move_precedence(TieRule r);
}  // namespace detail

}  // namespace lmdtw
