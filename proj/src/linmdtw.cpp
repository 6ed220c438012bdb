#include "linmdtw/linmdtw.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <mutex>

namespace lmdtw {

namespace {

// Recursion depth below which parallel_halves spawns a thread per split.
constexpr int kMaxAsyncDepth = 4;

template <class T>
PivotSearch search_pivot(SeriesView x, SeriesView y, const CostFunction& cost,
                         const LinMdtwConfig& cfg, RetainedCounter* retained,
                         ProgressCounter* progress) {
  const std::size_t m = x.length();
  const std::size_t n = y.length();
  const std::size_t last = m + n - 2;
  const std::size_t diagonals = m + n - 1;
  const std::size_t kstop_fwd = (diagonals + 1) / 2;
  const std::size_t kstop_bwd = diagonals % 2 == 0 ? kstop_fwd + 1 : kstop_fwd;

  DiagRunOptions fopts;
  fopts.direction = Direction::forward;
  fopts.mode = cfg.mode;
  fopts.parallel_min_length = cfg.parallel_min_length;
  fopts.retain_raw = true;
  fopts.retained = retained;
  fopts.progress = progress;
  auto fwd = diag_dtw<T>(x, y, cost, kstop_fwd, fopts);
  if (progress) progress->flush();

  // Fold the raw costs into the forward diagonals right away so that only
  // three forward diagonals stay alive during the reverse run.
  auto& fb = fwd.buffers;
  for (std::size_t s = 0; s < 3; ++s) {
    const std::size_t len = fb.length(s);
    for (std::size_t idx = 0; idx < len; ++idx) fb.d[s][idx] -= fb.c[s][idx];
  }
  fb.drop_raw();

  DiagRunOptions bopts = fopts;
  bopts.direction = Direction::reverse;
  bopts.retain_raw = false;
  auto bwd = diag_dtw<T>(x, y, cost, kstop_bwd, bopts);
  if (progress) progress->flush();
  const auto& bb = bwd.buffers;

  // Forward slot s (diagonal kstop_fwd-2+s) meets reverse slot 2-s; positions
  // run in opposite column order.
  const bool skip_corners = last >= 3;
  Pivot best;
  T best_total = std::numeric_limits<T>::infinity();
  bool found = false;
  auto consider = [&](std::size_t s, std::size_t idx) {
    const std::size_t len = fb.length(s);
    const Cell cell = fb.original_cell(s, idx);
    if (skip_corners && (cell == Cell{0, 0} || cell == Cell{m - 1, n - 1})) return;
    const T total = fb.d[s][idx] + bb.d[2 - s][len - 1 - idx];
    if (!found || total < best_total) {
      found = true;
      best_total = total;
      best = {cell.i, cell.j, static_cast<double>(total), fb.diagonal(s)};
    }
  };
  if (cfg.pivot_tie_rule == PivotTieRule::lowest_diagonal_first) {
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t idx = 0; idx < fb.length(s); ++idx) consider(s, idx);
  } else {
    for (std::size_t s = 3; s-- > 0;)
      for (std::size_t idx = fb.length(s); idx-- > 0;) consider(s, idx);
  }
  return {best, fwd.cells_processed + bwd.cells_processed};
}

void append_path(WarpingPath& out, const WarpingPath& part, std::size_t oi, std::size_t oj) {
  for (const Cell& c : part) {
    const Cell g{c.i + oi, c.j + oj};
    if (!out.empty() && out.back() == g) continue;
    out.push_back(g);
  }
}

template <class T>
class Solver {
 public:
  Solver(const CostFunction& cost, const LinMdtwConfig& cfg, ProgressCounter& progress,
         PivotTrace* trace)
      : cost_(cost), cfg_(cfg), progress_(progress), trace_(trace) {}

  void solve(SeriesView x, SeriesView y, std::size_t oi, std::size_t oj, WarpingPath& out,
             int depth) {
    const std::size_t m = x.length();
    const std::size_t n = y.length();
    if (m < cfg_.min_dim || n < cfg_.min_dim || m + n < 5) {
      OracleOptions o;
      o.tie_rule = cfg_.tie_rule;
      o.precision = cfg_.precision;
      o.retained = &retained_;
      RetainedLease pointers(&backpointers_, static_cast<std::uint64_t>(m) * n);
      const auto base = dtw_full(x, y, cost_, o);
      progress_.add(base.cells_processed);
      progress_.flush();
      append_path(out, base.path, oi, oj);
      return;
    }

    const auto found = search_pivot<T>(x, y, cost_, cfg_, &retained_, &progress_);
    const Pivot& p = found.pivot;
    if (trace_) {
      std::lock_guard lock(trace_mu_);
      trace_->push_back({p.i + oi, p.j + oj, p.total_at_pivot, p.diagonal_k});
    }

    SeriesView lx = x.subrange(0, p.i + 1);
    SeriesView ly = y.subrange(0, p.j + 1);
    SeriesView rx = x.subrange(p.i, m - p.i);
    SeriesView ry = y.subrange(p.j, n - p.j);
    if (cfg_.parallel_halves && depth < kMaxAsyncDepth) {
      WarpingPath right;
      auto task = std::async(std::launch::async, [&] {
        solve(rx, ry, oi + p.i, oj + p.j, right, depth + 1);
      });
      solve(lx, ly, oi, oj, out, depth + 1);
      task.get();
      append_path(out, right, 0, 0);
    } else {
      solve(lx, ly, oi, oj, out, depth + 1);
      solve(rx, ry, oi + p.i, oj + p.j, out, depth + 1);
    }
  }

  std::uint64_t peak_retained() const { return retained_.peak(); }
  std::uint64_t peak_backpointers() const { return backpointers_.peak(); }

 private:
  const CostFunction& cost_;
  const LinMdtwConfig& cfg_;
  ProgressCounter& progress_;
  PivotTrace* trace_;
  std::mutex trace_mu_;
  RetainedCounter retained_;
  RetainedCounter backpointers_;
};

template <class T>
AlignmentResult run(SeriesView x, SeriesView y, const CostFunction& cost,
                    const LinMdtwConfig& cfg, PivotTrace* trace) {
  const std::uint64_t budget = 2 * static_cast<std::uint64_t>(x.length()) * y.length();
  ProgressCounter progress(budget, cfg.progress);
  Solver<T> solver(cost, cfg, progress, trace);
  AlignmentResult res;
  res.path.reserve(x.length() + y.length());
  solver.solve(x, y, 0, 0, res.path, 0);
  res.cost = path_cost(x, y, res.path, cost, cfg.precision);
  res.cells_processed = progress.processed();
  res.cells_budget_2mn = budget;
  res.precision = cfg.precision;
  res.peak_retained_cells = solver.peak_retained();
  res.peak_backpointer_cells = solver.peak_backpointers();
  return res;
}

void check_inputs(SeriesView x, SeriesView y, const LinMdtwConfig& cfg) {
  detail::require_nonempty(x, "X");
  detail::require_nonempty(y, "Y");
  detail::require_same_dim(x, y);
  if (cfg.min_dim < 2) throw InvalidInput("min_dim must be >= 2");
}

}  // namespace

PivotSearch find_pivot(SeriesView x, SeriesView y, const CostFunction& cost,
                       const LinMdtwConfig& cfg, RetainedCounter* retained) {
  check_inputs(x, y, cfg);
  if (x.length() + y.length() < 4) {
    throw InvalidInput("pivot search needs M+N-2 >= 2; solve tiny grids with dtw_full");
  }
  return cfg.precision == Precision::f32
             ? search_pivot<float>(x, y, cost, cfg, retained, nullptr)
             : search_pivot<double>(x, y, cost, cfg, retained, nullptr);
}

AlignmentResult linmdtw(SeriesView x, SeriesView y, const CostFunction& cost,
                        const LinMdtwConfig& cfg, PivotTrace* trace) {
  check_inputs(x, y, cfg);
  return cfg.precision == Precision::f32 ? run<float>(x, y, cost, cfg, trace)
                                         : run<double>(x, y, cost, cfg, trace);
}

AlignmentResult linmdtw(const FeatureSeries& x, const FeatureSeries& y, const CostFunction& cost,
                        const LinMdtwConfig& cfg, PivotTrace* trace) {
  return linmdtw(x.view(), y.view(), cost, cfg, trace);
}

double cells_ratio(const AlignmentResult& result, std::size_t m, std::size_t n) {
  return static_cast<double>(result.cells_processed) /
         (static_cast<double>(m) * static_cast<double>(n));
}

double cells_upper_bound(std::size_t m, std::size_t n) {
  const double mm = static_cast<double>(m);
  const double nn = static_cast<double>(n);
  return 2.0 * mm * nn + (mm + nn) * std::log2(mm + nn);
}

}  // namespace lmdtw
