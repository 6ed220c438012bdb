#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "linmdtw/core.hpp"

namespace lmdtw {

/// Frame offsets between two alignments of the same pair of series.
struct DiscrepancyReport {
  /// Row errors for every element of the first path, then column errors.
  std::vector<std::uint64_t> errors;
  double fps = kDefaultFps;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

/// Default thresholds in seconds: 23 ms, 47 ms, 510 ms and 1 s.
inline const std::vector<double> kDefaultThresholdsSeconds{0.023, 0.047, 0.510, 1.0};
/// Frame-count stand-ins for the default thresholds at ~43 fps.
inline const std::vector<std::uint64_t> kDefaultThresholdsFrames{1, 2, 22, 43};

/// For each (i, j) in `first`: the row error min |j - k| over (i, k) in
/// `second`, and the column error min |i - k| over (k, j) in `second`.
/// Both paths must be valid for the same grid.
DiscrepancyReport discrepancy(const WarpingPath& first, const WarpingPath& second,
                              double fps = kDefaultFps);

/// Both directions merged into one distribution.
DiscrepancyReport discrepancy_bidirectional(const WarpingPath& a, const WarpingPath& b,
                                            double fps = kDefaultFps);

/// Fraction of errors whose duration (errors / fps seconds) is <= each threshold.
std::vector<double> proportion_below(const DiscrepancyReport& report,
                                     std::span<const double> thresholds_seconds);
/// Fraction of errors <= each threshold, counted in frames.
std::vector<double> proportion_below_frames(const DiscrepancyReport& report,
                                            std::span<const std::uint64_t> thresholds_frames);

/// Header of "# threshold_s=<t> proportion=<p>" lines followed by one error
/// per line.
void write_report(std::ostream& os, const DiscrepancyReport& report,
                  std::span<const double> thresholds_seconds);

enum class Algorithm { textbook, fastdtw, linmdtw, mrmsdtw };

std::string to_string(Algorithm a);
/// Accepts textbook/dtw, fastdtw, linmdtw, mrmsdtw.
Algorithm parse_algorithm(const std::string& s);

struct MemoryParams {
  std::size_t radius = 30;
  std::uint64_t budget = 100000;
};

/// DP cells an algorithm keeps, at 4 bytes per cell.
struct MemoryEstimate {
  Algorithm algorithm = Algorithm::textbook;
  std::uint64_t cells = 0;
  std::uint64_t bytes = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  MemoryParams params;
};

inline constexpr std::uint64_t kBytesPerCell = 4;

MemoryEstimate memory_estimate(Algorithm algorithm, std::size_t m, std::size_t n,
                               const MemoryParams& params = {});

/// "277.78 MiB (291.27 MB)": binary prefix first, decimal in parentheses.
std::string format_bytes(std::uint64_t bytes);
double to_binary_unit(std::uint64_t bytes, char prefix);   // 'K','M','G','T'
double to_decimal_unit(std::uint64_t bytes, char prefix);

/// round(seconds * fps).
std::size_t frames_for(double seconds, double fps);

}  // namespace lmdtw
