// Acceptance suite. Prints one PASS/FAIL line per criterion (detail lines
// start with '#') and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "linmdtw/approx.hpp"
#include "linmdtw/eval.hpp"
#include "linmdtw/linmdtw.hpp"
#include "linmdtw/oracle.hpp"
#include "linmdtw/synth.hpp"

using namespace lmdtw;
using lmdtw::testing::integer_series;
using lmdtw::testing::random_series;

namespace {

// Pinned tolerances and limits.
constexpr double kSweepSecondsLimit = 120.0;
constexpr double kScaleSecondsLimit = 300.0;
constexpr double kSinglePrecisionRelTol = 1e-4;
constexpr double kRatioLow = 1.8;
constexpr double kRatioHigh = 2.0 + 0.01;
constexpr std::size_t kRatioMinDim = 64;
constexpr double kTableTolerance = 0.02;
constexpr double kTableFps = 43.0664;
constexpr std::size_t kTableRadius = 30;
constexpr std::size_t kSweepMinInstances = 2000;
constexpr std::size_t kScaleInstances = 200;
constexpr std::size_t kBaselineInstances = 100;
constexpr std::size_t kTieInstances = 50;

int failures = 0;

void verdict(bool pass, const std::string& name, const std::string& detail) {
  std::printf("%s  %-26s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Worst observed peak_retained / (6 min(M,N)) across every linmdtw run.
double worst_memory_share = 0.0;
std::size_t memory_runs = 0;
std::size_t memory_violations = 0;

AlignmentResult tracked_linmdtw(const FeatureSeries& x, const FeatureSeries& y,
                                const LinMdtwConfig& cfg, PivotTrace* trace = nullptr) {
  auto r = linmdtw(x, y, {}, cfg, trace);
  const double limit = 6.0 * static_cast<double>(std::min(x.length(), y.length()));
  const double share = static_cast<double>(r.peak_retained_cells) / limit;
  worst_memory_share = std::max(worst_memory_share, share);
  ++memory_runs;
  if (share > 1.0) ++memory_violations;
  return r;
}

LinMdtwConfig with_min_dim(std::size_t md, Precision p = Precision::f64) {
  LinMdtwConfig c;
  c.min_dim = md;
  c.precision = p;
  return c;
}

// ---------------------------------------------------------------------------

void exactness_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::size_t instances = 0, cost_mismatch = 0, pivot_off = 0, pivots = 0;
  for (std::size_t m = 2; m <= 12; ++m) {
    for (std::size_t n = 2; n <= 12; ++n) {
      for (int rep = 0; rep < 6; ++rep) {
        for (int kind = 0; kind < 3; ++kind) {
          // 1-D reals, 1-D small integers (exact sums, frequent ties), 4-D reals.
          const auto x = kind == 0   ? random_series(rng, m, 1)
                         : kind == 1 ? integer_series(rng, m)
                                     : random_series(rng, m, 4);
          const auto y = kind == 0   ? random_series(rng, n, 1)
                         : kind == 1 ? integer_series(rng, n)
                                     : random_series(rng, n, 4);
          const auto brute = dtw_brute_enumerate(x.view(), y.view(), {}, 0);
          PivotTrace trace;
          const auto r = tracked_linmdtw(x, y, with_min_dim(2), &trace);
          ++instances;
          if (r.cost != brute.cost) ++cost_mismatch;
          for (const Pivot& p : trace) {
            ++pivots;
            if (!brute.on_optimal_path(p.i, p.j)) ++pivot_off;
          }
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = instances >= kSweepMinInstances && cost_mismatch == 0 && pivot_off == 0 &&
                    secs < kSweepSecondsLimit;
  verdict(pass, "exactness-sweep",
          fmt("%zu instances 2..12 x 2..12, cost mismatches %zu, pivots off optimal set %zu/%zu, "
              "%.1f s",
              instances, cost_mismatch, pivot_off, pivots, secs));
}

struct ScaleInstance {
  FeatureSeries x;
  FeatureSeries y;
  double exact;
};

std::vector<ScaleInstance> scale_instances() {
  std::mt19937_64 rng(7);
  std::vector<ScaleInstance> out;
  for (std::size_t t = 0; t < kScaleInstances; ++t) {
    const std::size_t m = 100 + rng() % 501;
    const std::size_t n = 100 + rng() % 501;
    const std::size_t d = 1 + rng() % 12;
    auto x = random_series(rng, m, d);
    auto y = random_series(rng, n, d);
    const double exact = dtw_full(x, y).cost;
    out.push_back({std::move(x), std::move(y), exact});
  }
  return out;
}

struct BoundTally {
  std::size_t runs = 0;
  std::size_t over = 0;
  double worst = 0.0;
};

void oracle_equivalence_and_bound(const std::vector<ScaleInstance>& inst) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t min_dims[] = {2, 16, 500};
  std::size_t mismatch64 = 0, runs = 0;
  double worst32 = 0.0;
  BoundTally tally[3];
  for (const auto& s : inst) {
    for (std::size_t k = 0; k < 3; ++k) {
      const auto r = tracked_linmdtw(s.x, s.y, with_min_dim(min_dims[k]));
      ++runs;
      if (r.cost != s.exact || !is_valid_path(r.path, s.x.length(), s.y.length())) ++mismatch64;
      const double q = static_cast<double>(r.cells_processed) /
                       cells_upper_bound(s.x.length(), s.y.length());
      ++tally[k].runs;
      tally[k].worst = std::max(tally[k].worst, q);
      if (q > 1.0) ++tally[k].over;
      const auto r32 = tracked_linmdtw(s.x, s.y, with_min_dim(min_dims[k], Precision::f32));
      worst32 = std::max(worst32, std::abs(r32.cost - s.exact) / s.exact);
    }
  }
  const double secs = seconds_since(t0);
  verdict(mismatch64 == 0 && worst32 < kSinglePrecisionRelTol && secs < kScaleSecondsLimit,
          "oracle-equivalence",
          fmt("%zu instances x min_dim {2,16,500}: 64-bit mismatches %zu/%zu, worst 32-bit "
              "relative difference %.2e, %.1f s",
              inst.size(), mismatch64, runs, worst32, secs));

  // 2000 x 2000 warped-sine pairs for the cells ratio.
  std::string ratios;
  bool ratio_ok = true;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SynthOptions o;
    o.kind = SynthKind::warped_sine;
    o.length = 2000;
    o.seed = seed;
    o.warp_strength = 0.15 * static_cast<double>(seed);
    o.dim = 12;
    const auto [a, b] = synthesize_pair(o);
    const auto r = tracked_linmdtw(a, b, with_min_dim(kRatioMinDim));
    const double ratio = cells_ratio(r, 2000, 2000);
    ratio_ok = ratio_ok && ratio >= kRatioLow && ratio <= kRatioHigh;
    const auto r500 = tracked_linmdtw(a, b, with_min_dim(500));
    std::printf("# 2000x2000 seed %llu: cells ratio %.4f at min_dim %zu, %.4f at min_dim 500\n",
                static_cast<unsigned long long>(seed), ratio, kRatioMinDim,
                cells_ratio(r500, 2000, 2000));
    ratios += fmt("%.3f ", ratio);
  }
  bool bound_ok = true;
  std::string per_dim;
  for (std::size_t k = 0; k < 3; ++k) {
    bound_ok = bound_ok && tally[k].over == 0;
    per_dim += fmt("min_dim %zu: %zu/%zu over (worst %.4f of bound); ", min_dims[k], tally[k].over,
                   tally[k].runs, tally[k].worst);
  }
  verdict(bound_ok && ratio_ok, "cell-count-bound",
          per_dim + fmt("2000x2000 ratios [%s] at min_dim %zu, need [%.2f, %.2f]", ratios.c_str(),
                        kRatioMinDim, kRatioLow, kRatioHigh));
}

void memory_instrumentation() {
  verdict(memory_violations == 0 && memory_runs > 0, "memory-6min",
          fmt("%zu linmdtw runs, %zu over 6 min(M,N), worst peak %.3f of 6 min(M,N)", memory_runs,
              memory_violations, worst_memory_share));
}

// ---------------------------------------------------------------------------

struct TableFigure {
  double value;
  char prefix;   // K, M or G
  bool decimal;  // unit convention for this figure
};

struct TableRow {
  const char* piece;
  double m_seconds;
  double n_seconds;
  TableFigure textbook, fastdtw, ours;
};

bool figure_matches(std::uint64_t bytes, const TableFigure& f, double& rel) {
  const double got = f.decimal ? to_decimal_unit(bytes, f.prefix) : to_binary_unit(bytes, f.prefix);
  rel = got / f.value - 1.0;
  return std::abs(rel) <= kTableTolerance;
}

void table_reproduction() {
  // Figures as printed. Binary prefixes throughout except the first row's
  // linear-memory figure, which only matches in decimal units.
  const TableRow rows[] = {
      {"Vivaldi", 188, 209, {277, 'M', false}, {3.86, 'M', false}, {194, 'K', true}},
      {"Candide", 268, 279, {527, 'M', false}, {5.5, 'M', false}, {270, 'K', false}},
      {"Beethoven 5", 445, 514, {1.58, 'G', false}, {9.12, 'M', false}, {448, 'K', false}},
      {"Schumann 3", 2124, 2199, {23.2, 'G', false}, {36.9, 'M', false}, {1.77, 'M', false}},
      {"Rite of Spring", 2053, 2082, {29.4, 'G', false}, {42.1, 'M', false}, {2.02, 'M', false}},
      {"Tchaikovsky 4", 2645, 2530, {46.1, 'G', false}, {51.9, 'M', false}, {2.48, 'M', false}},
      {"Shostakovich 11", 3647, 3765, {94.6, 'G', false}, {74.8, 'M', false}, {3.6, 'M', false}},
      {"Verdi Requiem", 4983, 5042, {173, 'G', false}, {102, 'M', false}, {4.9, 'M', false}},
      {"Das Rheingold", 8799, 8759, {542, 'G', false}, {180, 'M', false}, {8.6, 'M', false}},
  };
  std::size_t checked = 0, matched = 0;
  std::string failed;
  for (const auto& row : rows) {
    const std::size_t m = frames_for(row.m_seconds, kTableFps);
    const std::size_t n = frames_for(row.n_seconds, kTableFps);
    const MemoryParams params{kTableRadius, 0};
    const std::pair<Algorithm, const TableFigure*> figs[] = {
        {Algorithm::textbook, &row.textbook},
        {Algorithm::fastdtw, &row.fastdtw},
        {Algorithm::linmdtw, &row.ours}};
    std::string line = fmt("# %-16s %6zu x %6zu:", row.piece, m, n);
    for (const auto& [algo, fig] : figs) {
      const auto est = memory_estimate(algo, m, n, params);
      double rel = 0.0;
      const bool ok = figure_matches(est.bytes, *fig, rel);
      ++checked;
      if (ok) {
        ++matched;
      } else {
        failed += fmt("%s/%s ", row.piece, to_string(algo).c_str());
      }
      line += fmt("  %s %.3g%c%sB %+.1f%%%s", to_string(algo).c_str(), fig->value, fig->prefix,
                  fig->decimal ? "" : "i", 100.0 * rel, ok ? "" : " !");
    }
    std::printf("%s\n", line.c_str());
  }
  // Caption: constant-cell budgets.
  const std::pair<std::uint64_t, TableFigure> caption[] = {{100000, {391, 'K', false}},
                                                           {10000000, {38, 'M', false}}};
  for (const auto& [budget, fig] : caption) {
    const auto est = memory_estimate(Algorithm::mrmsdtw, 1, 1, {kTableRadius, budget});
    double rel = 0.0;
    const bool ok = figure_matches(est.bytes, fig, rel);
    ++checked;
    matched += ok;
    if (!ok) failed += fmt("mrmsdtw/%llu ", static_cast<unsigned long long>(budget));
    std::printf("# mrmsdtw budget %llu: %s (%+.1f%%)\n", static_cast<unsigned long long>(budget),
                format_bytes(est.bytes).c_str(), 100.0 * rel);
  }
  verdict(matched == checked, "memory-table",
          fmt("%zu/%zu figures within %.0f%%", matched, checked, 100 * kTableTolerance) +
              (failed.empty() ? "" : "; off: " + failed));
}

// ---------------------------------------------------------------------------

void baseline_sanity(const std::vector<ScaleInstance>& inst) {
  std::size_t wide_mismatch = 0, below_exact = 0, budget_mismatch = 0, checked = 0;
  for (std::size_t t = 0; t < kBaselineInstances; ++t) {
    const auto& s = inst[t];
    const std::size_t shorter = std::min(s.x.length(), s.y.length());
    if (fastdtw(s.x, s.y, {}, {shorter}).cost != s.exact) ++wide_mismatch;
    MrMsDtwOptions full;
    full.budget.max_cells = static_cast<std::uint64_t>(s.x.length()) * s.y.length();
    if (mrmsdtw(s.x, s.y, {}, full).cost != s.exact) ++budget_mismatch;
  }
  for (const auto& s : inst) {
    for (std::size_t radius : {0UL, 1UL, 10UL, 30UL}) {
      ++checked;
      if (fastdtw(s.x, s.y, {}, {radius}).cost < s.exact) ++below_exact;
    }
    for (std::uint64_t budget : {100ULL, 10000ULL, 100000ULL}) {
      MrMsDtwOptions o;
      o.budget.max_cells = budget;
      ++checked;
      if (mrmsdtw(s.x, s.y, {}, o).cost < s.exact) ++below_exact;
    }
  }
  verdict(wide_mismatch == 0 && budget_mismatch == 0 && below_exact == 0, "baseline-sanity",
          fmt("fastdtw radius>=min: %zu/%zu differ; mrmsdtw budget>=MN: %zu/%zu differ; "
              "approximate below exact: %zu/%zu",
              wide_mismatch, kBaselineInstances, budget_mismatch, kBaselineInstances, below_exact,
              checked));
}

void metric_suite(const std::vector<ScaleInstance>& inst) {
  bool self_zero = true;
  bool monotone = true;
  const std::vector<double> grid{0.0, 0.023, 0.047, 0.1, 0.25, 0.51, 1.0, 2.0, 10.0};
  for (std::size_t t = 0; t < 30; ++t) {
    const auto& s = inst[t];
    const auto exact = linmdtw(s.x, s.y, {}, with_min_dim(16));
    const auto self = discrepancy(exact.path, exact.path);
    self_zero = self_zero && std::all_of(self.errors.begin(), self.errors.end(),
                                         [](auto e) { return e == 0; });
    const auto approx = fastdtw(s.x, s.y, {}, {1});
    for (const auto& rep : {discrepancy(exact.path, approx.path),
                            discrepancy_bidirectional(exact.path, approx.path)}) {
      const auto props = proportion_below(rep, grid);
      monotone = monotone && std::is_sorted(props.begin(), props.end()) &&
                 props.front() >= 0.0 && props.back() <= 1.0;
    }
  }
  // Constructed example: the diagonal against the diagonal shifted two
  // columns to the right.
  const std::size_t n = 400;
  WarpingPath diag, shifted;
  for (std::size_t k = 0; k < n; ++k) diag.push_back({k, k});
  for (std::size_t j = 0; j <= 2; ++j) shifted.push_back({0, j});
  for (std::size_t i = 1; i + 2 < n; ++i) shifted.push_back({i, i + 2});
  for (std::size_t i = n - 2; i < n; ++i) shifted.push_back({i, n - 1});
  const auto props = proportion_below(discrepancy(diag, shifted), kDefaultThresholdsSeconds);
  const bool shift_ok = props[0] < 1.0 && props[2] == 1.0;
  verdict(self_zero && monotone && shift_ok, "metric-suite",
          fmt("self-discrepancy zero: %s; monotone: %s; 2-frame shift at 23/47/510/1000 ms: "
              "%.3f %.3f %.3f %.3f",
              self_zero ? "yes" : "no", monotone ? "yes" : "no", props[0], props[1], props[2],
              props[3]));
}

void tie_breaking() {
  std::mt19937_64 rng(99);
  std::size_t cost_diff = 0, invalid = 0, paths_differ = 0;
  std::vector<double> p23, p1s;
  for (std::size_t t = 0; t < kTieInstances; ++t) {
    // Quantised features make equal-cost predecessors common.
    const std::size_t m = 100 + rng() % 201, n = 100 + rng() % 201;
    std::uniform_int_distribution<int> q(0, 3);
    std::vector<float> a(m * 2), b(n * 2);
    for (auto& v : a) v = static_cast<float>(q(rng));
    for (auto& v : b) v = static_cast<float>(q(rng));
    const FeatureSeries x(std::move(a), 2), y(std::move(b), 2);
    OracleOptions diag_first, left_first;
    diag_first.tie_rule = TieRule::diag_left_up;
    left_first.tie_rule = TieRule::left_diag_up;
    const auto r1 = dtw_full(x, y, {}, diag_first);
    const auto r2 = dtw_full(x, y, {}, left_first);
    if (r1.cost != r2.cost) ++cost_diff;
    if (!is_valid_path(r1.path, m, n) || !is_valid_path(r2.path, m, n)) ++invalid;
    if (r1.path != r2.path) ++paths_differ;
    const auto props = proportion_below(discrepancy_bidirectional(r1.path, r2.path),
                                        kDefaultThresholdsSeconds);
    p23.push_back(props[0]);
    p1s.push_back(props[3]);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double e : v) s += e;
    return s / static_cast<double>(v.size());
  };
  verdict(cost_diff == 0 && invalid == 0, "tie-breaking",
          fmt("%zu instances: cost differences %zu, invalid paths %zu, paths differ %zu; mean "
              "proportion within 23 ms %.3f (min %.3f), within 1 s %.3f",
              kTieInstances, cost_diff, invalid, paths_differ, mean(p23),
              *std::min_element(p23.begin(), p23.end()), mean(p1s)));
}

}  // namespace

int main() {
  exactness_sweep();
  const auto inst = scale_instances();
  oracle_equivalence_and_bound(inst);
  memory_instrumentation();
  table_reproduction();
  baseline_sanity(inst);
  metric_suite(inst);
  tie_breaking();
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
