#include "linmdtw/diag_engine.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace lmdtw {

std::size_t diag_length(std::size_t k, std::size_t m, std::size_t n) {
  if (m == 0 || n == 0 || k > m + n - 2) {
    throw InvalidInput("diagonal " + std::to_string(k) + " outside a " + std::to_string(m) + "x" +
                       std::to_string(n) + " grid");
  }
  return std::min({k, m - 1, n - 1, m + n - 2 - k}) + 1;
}

Cell diag_to_grid(DiagAddress addr, std::size_t m, std::size_t n) {
  if (addr.idx >= diag_length(addr.k, m, n)) {
    throw InvalidInput("position " + std::to_string(addr.idx) + " outside diagonal " +
                       std::to_string(addr.k));
  }
  const std::size_t i = std::min(addr.k, m - 1) - addr.idx;
  return {i, addr.k - i};
}

DiagAddress grid_to_diag(Cell cell, std::size_t m, std::size_t n) {
  if (cell.i >= m || cell.j >= n) throw InvalidInput("cell outside grid");
  const std::size_t k = cell.i + cell.j;
  return {k, cell.j - diag_first_col(k, m)};
}

ProgressCounter::ProgressCounter(std::uint64_t total, Callback cb, std::uint64_t step)
    : total_(total), step_(step != 0 ? step : std::max<std::uint64_t>(1, total / 100)),
      cb_(std::move(cb)) {
  next_report_.store(step_, std::memory_order_relaxed);
}

namespace {
std::mutex& callback_mutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

void ProgressCounter::add(std::uint64_t cells) {
  const auto now = processed_.fetch_add(cells, std::memory_order_relaxed) + cells;
  if (!cb_) return;
  auto due = next_report_.load(std::memory_order_relaxed);
  if (now >= due && next_report_.compare_exchange_strong(due, now + step_)) {
    std::lock_guard lock(callback_mutex());
    cb_(now, total_);
  }
}

void ProgressCounter::flush() {
  if (!cb_) return;
  const auto now = processed();
  next_report_.store(now + step_, std::memory_order_relaxed);
  std::lock_guard lock(callback_mutex());
  cb_(now, total_);
}

namespace detail {

namespace {

struct DiagGeometry {
  std::size_t k;
  std::size_t first_col;       // of diagonal k
  std::size_t prev1_first_col; // of diagonal k-1
  std::size_t prev2_first_col; // of diagonal k-2
};

template <class T>
inline void update_cell(const OrientedPair& p, const CostFunction& cost, const DiagGeometry& g,
                        std::span<const T> prev2, std::span<const T> prev1, std::span<T> out_d,
                        std::span<T> out_c, std::size_t idx) {
  const std::size_t j = g.first_col + idx;
  const std::size_t i = g.k - j;
  const T c = cost.operator()<T>(p.xrow(i), p.yrow(j), p.x.dim());
  T value;
  if (i == 0) {
    value = prev1[j - 1 - g.prev1_first_col] + c;
  } else if (j == 0) {
    value = prev1[j - g.prev1_first_col] + c;
  } else {
    const T left = prev1[j - 1 - g.prev1_first_col];
    const T up = prev1[j - g.prev1_first_col];
    const T diag = prev2[j - 1 - g.prev2_first_col];
    value = std::min(std::min(left, up), diag) + c;
  }
  out_d[idx] = value;
  if (!out_c.empty()) out_c[idx] = c;
}

DiagGeometry geometry(std::size_t k, std::size_t m) {
  return {k, diag_first_col(k, m), diag_first_col(k - 1, m),
          k >= 2 ? diag_first_col(k - 2, m) : 0};
}

// Serial reference kernel.
template <class T>
void update_diagonal_serial(const OrientedPair& p, const CostFunction& cost, std::size_t k,
                            std::size_t len, std::span<const T> prev2, std::span<const T> prev1,
                            std::span<T> out_d, std::span<T> out_c) {
  const DiagGeometry g = geometry(k, p.x.length());
  for (std::size_t idx = 0; idx < len; ++idx) update_cell(p, cost, g, prev2, prev1, out_d, out_c, idx);
}

// OpenMP kernel: positions on one diagonal write disjoint slots.
template <class T>
void update_diagonal_omp(const OrientedPair& p, const CostFunction& cost, std::size_t k,
                         std::size_t len, std::span<const T> prev2, std::span<const T> prev1,
                         std::span<T> out_d, std::span<T> out_c, std::size_t min_parallel) {
  const DiagGeometry g = geometry(k, p.x.length());
  const auto n = static_cast<std::ptrdiff_t>(len);
#pragma omp parallel for schedule(static) if (len >= min_parallel)
  for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
    update_cell(p, cost, g, prev2, prev1, out_d, out_c, static_cast<std::size_t>(idx));
  }
}

}  // namespace

template <class T>
void update_diagonal_ordered(const OrientedPair& p, const CostFunction& cost, std::size_t k,
                             std::span<const T> prev2, std::span<const T> prev1,
                             std::span<T> out_d, std::span<T> out_c,
                             std::span<const std::size_t> order) {
  const DiagGeometry g = geometry(k, p.x.length());
  for (std::size_t idx : order) update_cell(p, cost, g, prev2, prev1, out_d, out_c, idx);
}

template void update_diagonal_ordered<float>(const OrientedPair&, const CostFunction&,
                                             std::size_t, std::span<const float>,
                                             std::span<const float>, std::span<float>,
                                             std::span<float>, std::span<const std::size_t>);
template void update_diagonal_ordered<double>(const OrientedPair&, const CostFunction&,
                                              std::size_t, std::span<const double>,
                                              std::span<const double>, std::span<double>,
                                              std::span<double>, std::span<const std::size_t>);

}  // namespace detail

template <class T>
DiagRunResult<T> diag_dtw(SeriesView x, SeriesView y, const CostFunction& cost, std::size_t kstop,
                          const DiagRunOptions& opts) {
  detail::require_nonempty(x, "X");
  detail::require_nonempty(y, "Y");
  detail::require_same_dim(x, y);
  const std::size_t m = x.length();
  const std::size_t n = y.length();
  if (kstop < 2 || kstop > m + n - 2) {
    throw InvalidInput("kstop " + std::to_string(kstop) + " outside [2, " +
                       std::to_string(m + n - 2) + "]");
  }

  const std::size_t cap = std::min(m, n);
  DiagRunResult<T> out;
  auto& bufs = out.buffers;
  bufs.rows = m;
  bufs.cols = n;
  bufs.direction = opts.direction;
  bufs.k_current = kstop;
  bufs.lease = RetainedLease(opts.retained, (opts.retain_raw ? 6 : 3) * cap);

  // ring[s] is the physical buffer holding diagonal k-2+s.
  std::array<std::vector<T>, 3> d;
  std::array<std::vector<T>, 3> c;
  for (std::size_t s = 0; s < 3; ++s) {
    d[s].assign(cap, T{0});
    if (opts.retain_raw) c[s].assign(cap, T{0});
  }
  std::array<std::size_t, 3> ring{0, 1, 2};

  const detail::OrientedPair pair{x, y, opts.direction == Direction::reverse};
  auto raw_span = [&](std::size_t phys) {
    return opts.retain_raw ? std::span<T>(c[phys]) : std::span<T>();
  };

  // Diagonal 0 goes in ring[2]; each later diagonal is written over the
  // oldest buffer and the ring rotates.
  {
    const T c00 = cost.operator()<T>(pair.xrow(0), pair.yrow(0), x.dim());
    d[ring[2]][0] = c00;
    if (opts.retain_raw) c[ring[2]][0] = c00;
  }
  std::uint64_t cells = 1;
  if (opts.progress) opts.progress->add(1);

  for (std::size_t k = 1; k <= kstop; ++k) {
    std::rotate(ring.begin(), ring.begin() + 1, ring.end());
    const std::size_t len = diag_length(k, m, n);
    std::span<const T> prev1(d[ring[1]]);
    std::span<const T> prev2(d[ring[0]]);
    std::span<T> out_d(d[ring[2]]);
    if (opts.mode == ExecutionMode::parallel) {
      detail::update_diagonal_omp<T>(pair, cost, k, len, prev2, prev1, out_d, raw_span(ring[2]),
                                     opts.parallel_min_length);
    } else {
      detail::update_diagonal_serial<T>(pair, cost, k, len, prev2, prev1, out_d,
                                        raw_span(ring[2]));
    }
    cells += len;
    if (opts.progress) opts.progress->add(len);
  }

  for (std::size_t s = 0; s < 3; ++s) {
    bufs.d[s] = std::move(d[ring[s]]);
    if (opts.retain_raw) bufs.c[s] = std::move(c[ring[s]]);
  }
  out.cells_processed = cells;
  return out;
}

template DiagRunResult<float> diag_dtw<float>(SeriesView, SeriesView, const CostFunction&,
                                              std::size_t, const DiagRunOptions&);
template DiagRunResult<double> diag_dtw<double>(SeriesView, SeriesView, const CostFunction&,
                                                std::size_t, const DiagRunOptions&);

}  // namespace lmdtw
