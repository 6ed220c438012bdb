#include "linmdtw/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lmdtw {

namespace {
constexpr std::size_t kEmpty = std::numeric_limits<std::size_t>::max();

bool row_empty(const std::pair<std::size_t, std::size_t>& r) { return r.first > r.second; }

void widen(Window& w, std::size_t i, std::size_t lo, std::size_t hi) {
  auto& r = w.span[i];
  if (row_empty(r)) {
    r = {lo, hi};
  } else {
    r.first = std::min(r.first, lo);
    r.second = std::max(r.second, hi);
  }
}

Window empty_window(std::size_t m, std::size_t n) {
  Window w;
  w.rows = m;
  w.cols = n;
  w.span.assign(m, {kEmpty, 0});
  return w;
}
}  // namespace

std::uint64_t Window::cell_count() const {
  std::uint64_t total = 0;
  for (const auto& [lo, hi] : span) total += hi >= lo ? hi - lo + 1 : 0;
  return total;
}

Window Window::full(std::size_t m, std::size_t n) {
  Window w;
  w.rows = m;
  w.cols = n;
  w.span.assign(m, {0, n - 1});
  return w;
}

std::vector<std::string> validate_window(const Window& w) {
  std::vector<std::string> out;
  if (w.rows == 0 || w.cols == 0 || w.span.size() != w.rows) {
    out.emplace_back("window shape does not match its row count");
    return out;
  }
  for (std::size_t i = 0; i < w.rows; ++i) {
    const auto [lo, hi] = w.span[i];
    const std::string row = "row " + std::to_string(i);
    if (lo > hi) out.push_back(row + " is empty");
    if (hi >= w.cols) out.push_back(row + " exceeds the grid");
    if (i > 0) {
      const auto [plo, phi] = w.span[i - 1];
      if (lo < plo || hi < phi) out.push_back(row + " breaks monotonicity");
      if (lo > phi + 1) out.push_back(row + " is disconnected from the row above");
    }
  }
  if (!w.contains(0, 0)) out.emplace_back("window misses (0,0)");
  if (!w.contains(w.rows - 1, w.cols - 1)) out.emplace_back("window misses (M-1,N-1)");
  return out;
}

namespace detail {

void normalize_window(Window& w) {
  const std::size_t m = w.rows;
  const std::size_t n = w.cols;
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = w.span[i];
    if (row_empty(r)) {
      const std::size_t at = i == 0 ? 0 : w.span[i - 1].second;
      r = {at, at};
    }
    r.second = std::min(r.second, n - 1);
    r.first = std::min(r.first, r.second);
  }
  w.span.front().first = 0;
  w.span.back().second = n - 1;
  for (std::size_t i = 1; i < m; ++i)
    w.span[i].second = std::max(w.span[i].second, w.span[i - 1].second);
  for (std::size_t i = m - 1; i-- > 0;)
    w.span[i].first = std::min(w.span[i].first, w.span[i + 1].first);
  for (std::size_t i = 1; i < m; ++i)
    w.span[i].first = std::min(w.span[i].first, w.span[i - 1].second + 1);
}

FeatureSeries halve_keep_tail(const FeatureSeries& x) {
  const std::size_t len = x.length();
  const std::size_t dim = x.dim();
  const std::size_t out_len = (len + 1) / 2;
  std::vector<float> out(out_len * dim);
  for (std::size_t a = 0; a < out_len; ++a) {
    const std::size_t first = 2 * a;
    const std::size_t count = std::min<std::size_t>(2, len - first);
    for (std::size_t d = 0; d < dim; ++d) {
      float s = 0.0F;
      for (std::size_t t = 0; t < count; ++t) s += x.frame(first + t)[d];
      out[a * dim + d] = s / static_cast<float>(count);
    }
  }
  return FeatureSeries(std::move(out), dim, x.fps() / static_cast<double>(len == 1 ? 1 : 2));
}

}  // namespace detail

FeatureSeries coarsen(const FeatureSeries& x) {
  const std::size_t len = x.length();
  if (len < 2) throw InvalidInput("coarsen needs at least two frames");
  const std::size_t dim = x.dim();
  const std::size_t out_len = len / 2;
  std::vector<float> out(out_len * dim);
  for (std::size_t a = 0; a < out_len; ++a) {
    const auto f0 = x.frame(2 * a);
    const auto f1 = x.frame(2 * a + 1);
    for (std::size_t d = 0; d < dim; ++d) out[a * dim + d] = 0.5F * (f0[d] + f1[d]);
  }
  return FeatureSeries(std::move(out), dim, x.fps() / 2.0);
}

Window expand_window(const WarpingPath& coarse_path, std::size_t radius, std::size_t m,
                     std::size_t n) {
  if (m == 0 || n == 0) throw InvalidInput("window grid must be non-empty");
  Window w = empty_window(m, n);
  for (const Cell& c : coarse_path) {
    const std::size_t r0 = 2 * c.i;
    const std::size_t c0 = 2 * c.j;
    if (r0 >= m + radius || c0 >= n + radius) continue;
    const std::size_t row_lo = r0 > radius ? r0 - radius : 0;
    const std::size_t row_hi = std::min(r0 + 1 + radius, m - 1);
    const std::size_t col_lo = std::min(c0 > radius ? c0 - radius : 0, n - 1);
    const std::size_t col_hi = std::min(c0 + 1 + radius, n - 1);
    for (std::size_t i = row_lo; i <= row_hi; ++i) widen(w, i, col_lo, col_hi);
  }
  detail::normalize_window(w);
  return w;
}

namespace {

template <class T>
AlignmentResult run_windowed(SeriesView x, SeriesView y, const CostFunction& cost,
                             const Window& w, const WindowedOptions& opts) {
  const std::size_t m = x.length();
  const std::size_t dim = x.dim();
  std::vector<std::uint64_t> offset(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    offset[i + 1] = offset[i] + (w.span[i].second - w.span[i].first + 1);
  }
  const std::uint64_t cells = offset[m];
  RetainedLease lease(opts.retained, cells);
  std::vector<T> acc(cells);
  std::vector<Move> moves(cells, Move::diag);
  const auto order = detail::move_precedence(opts.tie_rule);
  const T inf = std::numeric_limits<T>::infinity();

  auto at = [&](std::size_t i, std::size_t j) -> T {
    const auto [lo, hi] = w.span[i];
    return (j < lo || j > hi) ? inf : acc[offset[i] + (j - lo)];
  };

  for (std::size_t i = 0; i < m; ++i) {
    const auto [lo, hi] = w.span[i];
    for (std::size_t j = lo; j <= hi; ++j) {
      const T c = cost.operator()<T>(x.row(i), y.row(j), dim);
      T value;
      Move mv = Move::diag;
      if (i == 0 && j == 0) {
        value = c;
      } else {
        const T left = j > lo ? acc[offset[i] + (j - 1 - lo)] : inf;
        const T up = i > 0 ? at(i - 1, j) : inf;
        const T diag = (i > 0 && j > 0) ? at(i - 1, j - 1) : inf;
        const T best = std::min(std::min(left, up), diag);
        for (Move cand : order) {
          const T v = cand == Move::left ? left : (cand == Move::up ? up : diag);
          if (v == best) {
            mv = cand;
            break;
          }
        }
        value = best + c;
      }
      acc[offset[i] + (j - lo)] = value;
      moves[offset[i] + (j - lo)] = mv;
    }
  }

  AlignmentResult res;
  const std::size_t n = y.length();
  res.cost = static_cast<double>(at(m - 1, n - 1));
  std::size_t i = m - 1;
  std::size_t j = n - 1;
  res.path.push_back({i, j});
  while (i > 0 || j > 0) {
    const Move mv = moves[offset[i] + (j - w.span[i].first)];
    if (mv == Move::left || i == 0) {
      --j;
    } else if (mv == Move::up || j == 0) {
      --i;
    } else {
      --i;
      --j;
    }
    res.path.push_back({i, j});
  }
  std::reverse(res.path.begin(), res.path.end());
  res.cells_processed = cells;
  res.cells_budget_2mn = 2 * static_cast<std::uint64_t>(m) * n;
  res.precision = opts.precision;
  res.peak_retained_cells = cells;
  res.peak_backpointer_cells = cells;
  return res;
}

}  // namespace

AlignmentResult constrained_dtw(SeriesView x, SeriesView y, const CostFunction& cost,
                                const Window& window, const WindowedOptions& opts) {
  detail::require_nonempty(x, "X");
  detail::require_nonempty(y, "Y");
  detail::require_same_dim(x, y);
  if (window.rows != x.length() || window.cols != y.length()) {
    throw InvalidInput("window shape does not match the series");
  }
  const auto problems = validate_window(window);
  if (!problems.empty()) throw InvalidInput("invalid window: " + problems.front());
  return opts.precision == Precision::f32 ? run_windowed<float>(x, y, cost, window, opts)
                                          : run_windowed<double>(x, y, cost, window, opts);
}

AlignmentResult constrained_dtw(const FeatureSeries& x, const FeatureSeries& y,
                                const CostFunction& cost, const Window& window,
                                const WindowedOptions& opts) {
  return constrained_dtw(x.view(), y.view(), cost, window, opts);
}

namespace {

struct Tally {
  std::uint64_t cells = 0;
  std::uint64_t peak = 0;
};

AlignmentResult fastdtw_level(const FeatureSeries& x, const FeatureSeries& y,
                              const CostFunction& cost, const FastDtwOptions& opts, Tally& tally) {
  const std::size_t m = x.length();
  const std::size_t n = y.length();
  if (std::min(m, n) <= opts.radius + 2) {
    OracleOptions o;
    o.tie_rule = opts.tie_rule;
    o.precision = opts.precision;
    auto r = dtw_full(x, y, cost, o);
    const std::uint64_t cells = static_cast<std::uint64_t>(m) * n;
    tally.cells += cells;
    tally.peak = std::max(tally.peak, cells);
    return r;
  }
  const auto coarse = fastdtw_level(coarsen(x), coarsen(y), cost, opts, tally);
  const Window w = expand_window(coarse.path, opts.radius, m, n);
  WindowedOptions wo;
  wo.tie_rule = opts.tie_rule;
  wo.precision = opts.precision;
  auto r = constrained_dtw(x, y, cost, w, wo);
  tally.cells += r.cells_processed;
  tally.peak = std::max(tally.peak, r.peak_retained_cells);
  return r;
}

}  // namespace

AlignmentResult fastdtw(const FeatureSeries& x, const FeatureSeries& y, const CostFunction& cost,
                        const FastDtwOptions& opts) {
  detail::require_same_dim(x.view(), y.view());
  Tally tally;
  auto r = fastdtw_level(x, y, cost, opts, tally);
  r.cells_processed = tally.cells;
  r.peak_retained_cells = tally.peak;
  r.peak_backpointer_cells = tally.peak;
  r.cells_budget_2mn = 2 * static_cast<std::uint64_t>(x.length()) * y.length();
  return r;
}

namespace {

// One refinement step: a path on the ceil(M/2) x ceil(N/2) grid becomes a path
// on the M x N grid. The coarse path is cut into runs whose windows fit the
// block budget; consecutive runs share an anchor cell.
WarpingPath refine_path(const WarpingPath& coarse, const FeatureSeries& x, const FeatureSeries& y,
                        const CostFunction& cost, const MrMsDtwOptions& opts,
                        std::uint64_t block_budget, RetainedCounter& live, Tally& tally) {
  const std::size_t m = x.length();
  const std::size_t n = y.length();
  const std::size_t r = opts.refine_radius;
  const std::uint64_t per_cell = (2 + 2 * r) * (2 + 2 * r);

  auto block_corner = [&](const Cell& c) {
    return Cell{std::min(2 * c.i + 1, m - 1), std::min(2 * c.j + 1, n - 1)};
  };

  // Window of coarse cells [first, last] between two anchors, in local
  // coordinates of the anchor rectangle.
  auto build = [&](std::size_t first, std::size_t last, Cell from, Cell to) {
    Window w = empty_window(to.i - from.i + 1, to.j - from.j + 1);
    for (std::size_t k = first; k <= last; ++k) {
      const Cell c = coarse[k];
      const std::size_t row_lo = std::max(2 * c.i > r ? 2 * c.i - r : 0, from.i);
      const std::size_t row_hi = std::min(2 * c.i + 1 + r, to.i);
      const std::size_t col_lo = std::max(2 * c.j > r ? 2 * c.j - r : 0, from.j);
      const std::size_t col_hi = std::min(2 * c.j + 1 + r, to.j);
      if (row_lo > row_hi || col_lo > col_hi) continue;
      for (std::size_t i = row_lo; i <= row_hi; ++i)
        widen(w, i - from.i, col_lo - from.j, col_hi - from.j);
    }
    widen(w, 0, 0, 0);
    widen(w, w.rows - 1, w.cols - 1, w.cols - 1);
    detail::normalize_window(w);
    return w;
  };

  WarpingPath out;
  out.reserve(m + n);
  out.push_back({0, 0});
  Cell from{0, 0};
  std::size_t first = 0;
  const std::size_t run = std::max<std::uint64_t>(1, block_budget / per_cell);
  while (first < coarse.size()) {
    std::size_t last = std::min(first + run, coarse.size()) - 1;
    Window w;
    Cell to;
    for (;;) {
      to = last + 1 == coarse.size() ? Cell{m - 1, n - 1} : block_corner(coarse[last]);
      w = build(first, last, from, to);
      if (w.cell_count() <= block_budget || last == first) break;
      last = first + (last - first) / 2;
    }
    if (to != from) {
      WindowedOptions wo;
      wo.tie_rule = opts.tie_rule;
      wo.precision = opts.precision;
      wo.retained = &live;
      const auto seg = constrained_dtw(x.view().subrange(from.i, w.rows),
                                       y.view().subrange(from.j, w.cols), cost, w, wo);
      tally.cells += seg.cells_processed;
      for (std::size_t k = 1; k < seg.path.size(); ++k)
        out.push_back({seg.path[k].i + from.i, seg.path[k].j + from.j});
    }
    from = to;
    first = last + 1;
  }
  return out;
}

}  // namespace

AlignmentResult mrmsdtw(const FeatureSeries& x, const FeatureSeries& y, const CostFunction& cost,
                        const MrMsDtwOptions& opts) {
  detail::require_same_dim(x.view(), y.view());
  const std::uint64_t budget = opts.budget.max_cells;
  if (budget < CellBudget::kFloor) {
    throw InvalidInput("cell budget " + std::to_string(budget) + " below the floor of " +
                       std::to_string(CellBudget::kFloor));
  }
  if (!(opts.coarse_fraction > 0.0 && opts.coarse_fraction < 1.0)) {
    throw InvalidInput("coarse_fraction must lie strictly between 0 and 1");
  }
  const auto coarse_budget =
      static_cast<std::uint64_t>(std::floor(static_cast<double>(budget) * opts.coarse_fraction));
  const std::uint64_t block_budget = budget - coarse_budget;
  const std::uint64_t side = 2 + 2 * opts.refine_radius;
  if (side * side > block_budget || coarse_budget == 0) {
    throw InvalidInput("cell budget too small for refine radius " +
                       std::to_string(opts.refine_radius));
  }

  const std::size_t m = x.length();
  const std::size_t n = y.length();
  RetainedCounter live;
  Tally tally;
  OracleOptions o;
  o.tie_rule = opts.tie_rule;
  o.precision = opts.precision;

  AlignmentResult res;
  res.precision = opts.precision;
  res.cells_budget_2mn = 2 * static_cast<std::uint64_t>(m) * n;
  if (static_cast<std::uint64_t>(m) * n <= budget) {
    RetainedLease lease(&live, static_cast<std::uint64_t>(m) * n);
    res = dtw_full(x, y, cost, o);
    res.cells_budget_2mn = 2 * static_cast<std::uint64_t>(m) * n;
    res.peak_retained_cells = live.peak();
    res.peak_backpointer_cells = live.peak();
    return res;
  }

  std::vector<FeatureSeries> xs{x};
  std::vector<FeatureSeries> ys{y};
  while (static_cast<std::uint64_t>(xs.back().length()) * ys.back().length() > coarse_budget) {
    xs.push_back(detail::halve_keep_tail(xs.back()));
    ys.push_back(detail::halve_keep_tail(ys.back()));
  }

  WarpingPath path;
  {
    const std::uint64_t cells = static_cast<std::uint64_t>(xs.back().length()) * ys.back().length();
    RetainedLease lease(&live, cells);
    path = dtw_full(xs.back(), ys.back(), cost, o).path;
    tally.cells += cells;
  }
  for (std::size_t level = xs.size() - 1; level-- > 0;) {
    path = refine_path(path, xs[level], ys[level], cost, opts, block_budget, live, tally);
  }

  res.cost = path_cost(x, y, path, cost, opts.precision);
  res.path = std::move(path);
  res.cells_processed = tally.cells;
  res.peak_retained_cells = live.peak();
  res.peak_backpointer_cells = live.peak();
  return res;
}

}  // namespace lmdtw
