#include "linmdtw/oracle.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <new>
#include <optional>

namespace lmdtw {

std::string to_string(TieRule r) {
  switch (r) {
    case TieRule::diag_left_up: return "diag";
    case TieRule::left_diag_up: return "left";
    case TieRule::up_diag_left: return "up";
  }
  return "diag";
}

TieRule parse_tie_rule(const std::string& s) {
  if (s == "diag" || s == "diag-left-up") return TieRule::diag_left_up;
  if (s == "left" || s == "left-diag-up") return TieRule::left_diag_up;
  if (s == "up" || s == "up-diag-left") return TieRule::up_diag_left;
  throw InvalidInput("unknown tie rule '" + s + "' (expected diag, left or up)");
}

BackpointerGrid::BackpointerGrid(std::size_t m, std::size_t n)
    : m_(m), n_(n), bits_((m * n + 3) / 4, 0) {}

WarpingPath BackpointerGrid::backtrace() const {
  WarpingPath path;
  path.reserve(m_ + n_ - 1);
  std::size_t i = m_ - 1;
  std::size_t j = n_ - 1;
  path.push_back({i, j});
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      switch (get(i, j)) {
        case Move::left: --j; break;
        case Move::up: --i; break;
        case Move::diag: --i; --j; break;
      }
    }
    path.push_back({i, j});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace detail {

std::array<Move, 3> move_precedence(TieRule r) {
  switch (r) {
    case TieRule::diag_left_up: return {Move::diag, Move::left, Move::up};
    case TieRule::left_diag_up: return {Move::left, Move::diag, Move::up};
    case TieRule::up_diag_left: return {Move::up, Move::diag, Move::left};
  }
  return {Move::diag, Move::left, Move::up};
}

}  // namespace detail

namespace {

// Interior cell: pick the minimum of the three predecessors, resolving exact
// ties by precedence.
template <class T>
inline std::pair<T, Move> choose(T left, T up, T diag, const std::array<Move, 3>& order) {
  const T best = std::min(std::min(left, up), diag);
  for (Move mv : order) {
    const T v = mv == Move::left ? left : (mv == Move::up ? up : diag);
    if (v == best) return {best, mv};
  }
  return {best, Move::diag};
}

template <class T>
AlignmentResult run_full(SeriesView x, SeriesView y, const CostFunction& cost,
                         const OracleOptions& opts) {
  const std::size_t m = x.length();
  const std::size_t n = y.length();
  const std::size_t dim = x.dim();
  const std::uint64_t cells = static_cast<std::uint64_t>(m) * n;
  const std::uint64_t grid_bytes = (cells + 3) / 4;
  if (grid_bytes > opts.max_backpointer_bytes) {
    throw ResourceError("textbook DTW needs " + std::to_string(cells) +
                            " backpointer cells (" + std::to_string(grid_bytes) +
                            " bytes), above the configured limit",
                        grid_bytes);
  }

  const auto order = detail::move_precedence(opts.tie_rule);
  const bool rows_outer = n <= m;  // rolling line runs along the shorter series
  const std::size_t line = rows_outer ? n : m;
  const std::size_t outer = rows_outer ? m : n;

  std::vector<T> prev;
  std::vector<T> cur;
  std::optional<BackpointerGrid> grid;
  try {
    grid.emplace(m, n);
    prev.resize(line);
    cur.resize(line);
  } catch (const std::bad_alloc&) {
    throw ResourceError("out of memory allocating textbook DTW tables for " + std::to_string(m) +
                            "x" + std::to_string(n),
                        grid_bytes + 2 * line * sizeof(T));
  }
  RetainedLease lease(opts.retained, 2 * line);

  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t l = 0; l < line; ++l) {
      const std::size_t i = rows_outer ? o : l;
      const std::size_t j = rows_outer ? l : o;
      const T c = cost.operator()<T>(x.row(i), y.row(j), dim);
      // In both orientations: cur[l-1] is the in-line predecessor, prev[l]
      // the cross-line predecessor, prev[l-1] the diagonal one.
      T value;
      if (i == 0 && j == 0) {
        value = c;
      } else if (i == 0) {
        value = (rows_outer ? cur[l - 1] : prev[l]) + c;
        grid->set(i, j, Move::left);
      } else if (j == 0) {
        value = (rows_outer ? prev[l] : cur[l - 1]) + c;
        grid->set(i, j, Move::up);
      } else {
        const T left = rows_outer ? cur[l - 1] : prev[l];
        const T up = rows_outer ? prev[l] : cur[l - 1];
        const auto [best, mv] = choose(left, up, prev[l - 1], order);
        value = best + c;
        grid->set(i, j, mv);
      }
      cur[l] = value;
    }
    std::swap(prev, cur);
  }

  AlignmentResult res;
  res.cost = static_cast<double>(prev[line - 1]);
  res.path = grid->backtrace();
  res.cells_processed = cells;
  res.cells_budget_2mn = 2 * cells;
  res.precision = opts.precision;
  res.peak_retained_cells = 2 * line;
  res.peak_backpointer_cells = cells;
  return res;
}

}  // namespace

AlignmentResult dtw_full(SeriesView x, SeriesView y, const CostFunction& cost,
                         const OracleOptions& opts) {
  detail::require_nonempty(x, "X");
  detail::require_nonempty(y, "Y");
  detail::require_same_dim(x, y);
  return opts.precision == Precision::f32 ? run_full<float>(x, y, cost, opts)
                                          : run_full<double>(x, y, cost, opts);
}

AlignmentResult dtw_full(const FeatureSeries& x, const FeatureSeries& y, const CostFunction& cost,
                         const OracleOptions& opts) {
  return dtw_full(x.view(), y.view(), cost, opts);
}

template <class T>
std::vector<T> accumulated_cost_matrix(SeriesView x, SeriesView y, const CostFunction& cost) {
  detail::require_same_dim(x, y);
  const std::size_t m = x.length();
  const std::size_t n = y.length();
  std::vector<T> d(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const T c = cost.operator()<T>(x.row(i), y.row(j), x.dim());
      if (i == 0 && j == 0) {
        d[0] = c;
      } else if (i == 0) {
        d[j] = d[j - 1] + c;
      } else if (j == 0) {
        d[i * n] = d[(i - 1) * n] + c;
      } else {
        const T best = std::min({d[i * n + j - 1], d[(i - 1) * n + j], d[(i - 1) * n + j - 1]});
        d[i * n + j] = best + c;
      }
    }
  }
  return d;
}

template std::vector<float> accumulated_cost_matrix<float>(SeriesView, SeriesView,
                                                           const CostFunction&);
template std::vector<double> accumulated_cost_matrix<double>(SeriesView, SeriesView,
                                                             const CostFunction&);

namespace {

struct Enumerator {
  std::size_t m, n;
  std::vector<double> c;  // raw costs, row-major
  std::size_t max_stored;
  BruteForceResult* out;
  WarpingPath stack;

  void record(double total) {
    if (total < out->cost) {
      out->cost = total;
      out->optimal_path_count = 0;
      out->optimal_paths.clear();
      std::fill(out->optimal_cells.begin(), out->optimal_cells.end(), false);
    }
    ++out->optimal_path_count;
    if (out->optimal_paths.size() < max_stored) out->optimal_paths.push_back(stack);
    for (const Cell& cell : stack) out->optimal_cells[cell.i * n + cell.j] = true;
  }

  // Costs are non-negative, so a partial sum already above the best total
  // cannot lead to an optimal path.
  void walk(std::size_t i, std::size_t j, double partial) {
    stack.push_back({i, j});
    const double total = partial + c[i * n + j];
    if (total <= out->cost) {
      if (i == m - 1 && j == n - 1) {
        record(total);
      } else {
        if (j + 1 < n) walk(i, j + 1, total);
        if (i + 1 < m) walk(i + 1, j, total);
        if (i + 1 < m && j + 1 < n) walk(i + 1, j + 1, total);
      }
    }
    stack.pop_back();
  }
};

}  // namespace

BruteForceResult dtw_brute_enumerate(SeriesView x, SeriesView y, const CostFunction& cost,
                                     std::size_t max_stored_paths) {
  detail::require_nonempty(x, "X");
  detail::require_nonempty(y, "Y");
  detail::require_same_dim(x, y);
  const std::size_t m = x.length();
  const std::size_t n = y.length();
  if (m * n > kBruteForceMaxCells) {
    throw InvalidInput("brute-force enumeration refuses grids above " +
                       std::to_string(kBruteForceMaxCells) + " cells");
  }
  BruteForceResult res;
  res.rows = m;
  res.cols = n;
  res.cost = std::numeric_limits<double>::infinity();
  res.optimal_cells.assign(m * n, false);

  Enumerator e{m, n, std::vector<double>(m * n), max_stored_paths, &res, {}};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) e.c[i * n + j] = cost.operator()<double>(x.row(i), y.row(j), x.dim());
  e.stack.reserve(m + n);
  e.walk(0, 0, 0.0);
  return res;
}

}  // namespace lmdtw
