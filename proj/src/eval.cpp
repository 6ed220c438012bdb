#include "linmdtw/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace lmdtw {

namespace {

struct Extent {
  std::size_t lo = std::numeric_limits<std::size_t>::max();
  std::size_t hi = 0;
};

std::uint64_t distance_to(const Extent& e, std::size_t v) {
  if (v < e.lo) return e.lo - v;
  if (v > e.hi) return v - e.hi;
  return 0;
}

void check_pair(const WarpingPath& a, const WarpingPath& b) {
  if (a.empty() || b.empty()) throw InvalidInput("cannot compare empty paths");
  if (a.back() != b.back()) {
    throw InvalidInput("paths end at different cells: (" + std::to_string(a.back().i) + "," +
                       std::to_string(a.back().j) + ") vs (" + std::to_string(b.back().i) + "," +
                       std::to_string(b.back().j) + ")");
  }
  const std::size_t m = a.back().i + 1;
  const std::size_t n = a.back().j + 1;
  for (const auto* p : {&a, &b}) {
    const auto v = validate_path(*p, m, n);
    if (!v.empty()) throw InvalidInput("invalid path: " + v.front().message);
  }
}

}  // namespace

DiscrepancyReport discrepancy(const WarpingPath& first, const WarpingPath& second, double fps) {
  check_pair(first, second);
  if (!(fps > 0.0)) throw InvalidInput("fps must be positive");
  const std::size_t m = first.back().i + 1;
  const std::size_t n = first.back().j + 1;

  // A warping path meets each row (and column) in one contiguous run.
  std::vector<Extent> by_row(m);
  std::vector<Extent> by_col(n);
  for (const Cell& c : second) {
    by_row[c.i].lo = std::min(by_row[c.i].lo, c.j);
    by_row[c.i].hi = std::max(by_row[c.i].hi, c.j);
    by_col[c.j].lo = std::min(by_col[c.j].lo, c.i);
    by_col[c.j].hi = std::max(by_col[c.j].hi, c.i);
  }

  DiscrepancyReport r;
  r.fps = fps;
  r.rows = m;
  r.cols = n;
  r.errors.reserve(2 * first.size());
  for (const Cell& c : first) r.errors.push_back(distance_to(by_row[c.i], c.j));
  for (const Cell& c : first) r.errors.push_back(distance_to(by_col[c.j], c.i));
  return r;
}

DiscrepancyReport discrepancy_bidirectional(const WarpingPath& a, const WarpingPath& b,
                                            double fps) {
  DiscrepancyReport r = discrepancy(a, b, fps);
  const DiscrepancyReport back = discrepancy(b, a, fps);
  r.errors.insert(r.errors.end(), back.errors.begin(), back.errors.end());
  return r;
}

std::vector<double> proportion_below(const DiscrepancyReport& report,
                                     std::span<const double> thresholds_seconds) {
  if (!(report.fps > 0.0)) throw InvalidInput("fps must be positive");
  std::vector<double> seconds;
  seconds.reserve(report.errors.size());
  for (auto e : report.errors) seconds.push_back(static_cast<double>(e) / report.fps);
  std::sort(seconds.begin(), seconds.end());
  std::vector<double> out;
  out.reserve(thresholds_seconds.size());
  for (double t : thresholds_seconds) {
    if (seconds.empty()) {
      out.push_back(1.0);
      continue;
    }
    const auto below = std::upper_bound(seconds.begin(), seconds.end(), t) - seconds.begin();
    out.push_back(static_cast<double>(below) / static_cast<double>(seconds.size()));
  }
  return out;
}

std::vector<double> proportion_below_frames(const DiscrepancyReport& report,
                                            std::span<const std::uint64_t> thresholds_frames) {
  std::vector<std::uint64_t> sorted = report.errors;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  for (auto t : thresholds_frames) {
    if (sorted.empty()) {
      out.push_back(1.0);
      continue;
    }
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    out.push_back(static_cast<double>(below) / static_cast<double>(sorted.size()));
  }
  return out;
}

void write_report(std::ostream& os, const DiscrepancyReport& report,
                  std::span<const double> thresholds_seconds) {
  const auto props = proportion_below(report, thresholds_seconds);
  os << "# M=" << report.rows << " N=" << report.cols << " fps=" << report.fps
     << " count=" << report.errors.size() << '\n';
  for (std::size_t k = 0; k < props.size(); ++k) {
    os << "# threshold_s=" << thresholds_seconds[k] << " proportion=" << props[k] << '\n';
  }
  for (auto e : report.errors) os << e << '\n';
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::textbook: return "textbook";
    case Algorithm::fastdtw: return "fastdtw";
    case Algorithm::linmdtw: return "linmdtw";
    case Algorithm::mrmsdtw: return "mrmsdtw";
  }
  return "textbook";
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "textbook" || s == "dtw") return Algorithm::textbook;
  if (s == "fastdtw") return Algorithm::fastdtw;
  if (s == "linmdtw") return Algorithm::linmdtw;
  if (s == "mrmsdtw") return Algorithm::mrmsdtw;
  throw InvalidInput("unknown algorithm '" + s + "'");
}

MemoryEstimate memory_estimate(Algorithm algorithm, std::size_t m, std::size_t n,
                               const MemoryParams& params) {
  if (m == 0 || n == 0) throw InvalidInput("memory estimate needs M, N >= 1");
  const std::uint64_t shorter = std::min(m, n);
  MemoryEstimate e;
  e.algorithm = algorithm;
  e.rows = m;
  e.cols = n;
  e.params = params;
  switch (algorithm) {
    case Algorithm::textbook: e.cells = static_cast<std::uint64_t>(m) * n; break;
    case Algorithm::fastdtw: e.cells = shorter * (4 * params.radius + 5); break;
    case Algorithm::linmdtw: e.cells = 6 * shorter; break;
    case Algorithm::mrmsdtw: e.cells = params.budget; break;
  }
  e.bytes = kBytesPerCell * e.cells;
  return e;
}

namespace {
int prefix_power(char prefix) {
  switch (prefix) {
    case 'K': return 1;
    case 'M': return 2;
    case 'G': return 3;
    case 'T': return 4;
    default: throw InvalidInput(std::string("unknown unit prefix '") + prefix + "'");
  }
}
}  // namespace

double to_binary_unit(std::uint64_t bytes, char prefix) {
  return static_cast<double>(bytes) / std::pow(1024.0, prefix_power(prefix));
}

double to_decimal_unit(std::uint64_t bytes, char prefix) {
  return static_cast<double>(bytes) / std::pow(1000.0, prefix_power(prefix));
}

std::string format_bytes(std::uint64_t bytes) {
  static constexpr char kPrefixes[] = {'K', 'M', 'G', 'T'};
  char prefix = 0;
  for (char p : kPrefixes) {
    if (to_binary_unit(bytes, p) >= 1.0) prefix = p;
  }
  char buf[96];
  if (prefix == 0) {
    std::snprintf(buf, sizeof buf, "%llu B", static_cast<unsigned long long>(bytes));
  } else {
    std::snprintf(buf, sizeof buf, "%.2f %ciB (%.2f %cB)", to_binary_unit(bytes, prefix), prefix,
                  to_decimal_unit(bytes, prefix), prefix);
  }
  return buf;
}

std::size_t frames_for(double seconds, double fps) {
  if (!(seconds > 0.0) || !(fps > 0.0)) throw InvalidInput("durations and fps must be positive");
  return static_cast<std::size_t>(std::llround(seconds * fps));
}

}  // namespace lmdtw
