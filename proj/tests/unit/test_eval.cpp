#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "helpers.hpp"
#include "linmdtw/eval.hpp"

using namespace lmdtw;
using lmdtw::testing::diagonal_path;

namespace {

// Diagonal of an n x n grid shifted right by `shift` columns in the interior.
WarpingPath shifted_diagonal(std::size_t n, std::size_t shift) {
  WarpingPath p;
  for (std::size_t j = 0; j <= shift; ++j) p.push_back({0, j});
  for (std::size_t i = 1; i + shift < n; ++i) p.push_back({i, i + shift});
  for (std::size_t i = n - shift; i < n; ++i) p.push_back({i, n - 1});
  return p;
}

}  // namespace

TEST(Discrepancy, SelfComparisonIsZero) {
  const WarpingPath p{{0, 0}, {0, 1}, {1, 2}, {2, 2}, {3, 3}};
  const auto r = discrepancy(p, p);
  EXPECT_EQ(r.errors.size(), 2 * p.size());
  EXPECT_TRUE(std::all_of(r.errors.begin(), r.errors.end(), [](auto e) { return e == 0; }));
  const auto props = proportion_below(r, kDefaultThresholdsSeconds);
  for (double v : props) EXPECT_EQ(v, 1.0);
}

TEST(Discrepancy, ConstantShiftGivesThatErrorInTheInterior) {
  const std::size_t n = 60;
  for (std::size_t shift : {1UL, 2UL, 5UL}) {
    const auto a = diagonal_path(n);
    const auto b = shifted_diagonal(n, shift);
    ASSERT_TRUE(is_valid_path(b, n, n));
    const auto r = discrepancy(a, b);
    // Row errors come first, one per element of the first path.
    for (std::size_t i = shift + 1; i + shift < n; ++i) EXPECT_EQ(r.errors[i], shift) << i;
    // Column errors for the same interior cells.
    for (std::size_t i = 2 * shift; i + 1 < n; ++i) EXPECT_EQ(r.errors[n + i], shift) << i;
  }
}

TEST(Discrepancy, TwoFrameShiftProportions) {
  const auto a = diagonal_path(200);
  const auto b = shifted_diagonal(200, 2);
  const auto props = proportion_below(discrepancy(a, b), kDefaultThresholdsSeconds);
  ASSERT_EQ(props.size(), 4U);
  EXPECT_LT(props[0], 1.0);
  EXPECT_EQ(props[2], 1.0);
  EXPECT_EQ(props[3], 1.0);
  EXPECT_TRUE(std::is_sorted(props.begin(), props.end()));
}

TEST(Discrepancy, SecondsUseLessOrEqual) {
  // One frame at 22050/512 fps lasts about 23.2 ms, so a 1-frame error is
  // above the 23 ms threshold but within 47 ms.
  DiscrepancyReport r;
  r.errors = {0, 0, 1, 2};
  const auto s = proportion_below(r, kDefaultThresholdsSeconds);
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], 1.0);
  const auto f = proportion_below_frames(r, kDefaultThresholdsFrames);
  EXPECT_DOUBLE_EQ(f[0], 0.75);
  EXPECT_DOUBLE_EQ(f[1], 1.0);
  // Exactly on the threshold counts as below.
  DiscrepancyReport exact;
  exact.fps = 10.0;
  exact.errors = {1};
  const std::vector<double> t{0.1};
  EXPECT_DOUBLE_EQ(proportion_below(exact, t)[0], 1.0);
}

TEST(Discrepancy, ProportionsAreMonotone) {
  const auto a = diagonal_path(80);
  WarpingPath b{{0, 0}};
  for (std::size_t j = 1; j < 80; ++j) b.push_back({0, j});
  for (std::size_t i = 1; i < 80; ++i) b.push_back({i, 79});
  const auto r = discrepancy_bidirectional(a, b);
  EXPECT_EQ(r.errors.size(), 2 * a.size() + 2 * b.size());
  const std::vector<double> t{0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 100.0};
  const auto props = proportion_below(r, t);
  EXPECT_TRUE(std::is_sorted(props.begin(), props.end()));
  EXPECT_EQ(props.back(), 1.0);
}

TEST(Discrepancy, RejectsMismatchedGrids) {
  EXPECT_THROW(discrepancy(diagonal_path(5), diagonal_path(6)), InvalidInput);
  EXPECT_THROW(discrepancy({}, {}), InvalidInput);
  EXPECT_THROW(discrepancy(diagonal_path(3), diagonal_path(3), 0.0), InvalidInput);
}

TEST(WriteReport, HeaderThenErrors) {
  const auto r = discrepancy(diagonal_path(10), shifted_diagonal(10, 1));
  std::ostringstream os;
  write_report(os, r, kDefaultThresholdsSeconds);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("# M=10 N=10", 0), 0U);
  int headers = 0, values = 0;
  while (std::getline(is, line)) (line[0] == '#' ? headers : values)++;
  EXPECT_EQ(headers, 4);
  EXPECT_EQ(values, 20);
}

TEST(MemoryEstimate, Formulas) {
  EXPECT_EQ(memory_estimate(Algorithm::textbook, 100, 200).cells, 20000U);
  EXPECT_EQ(memory_estimate(Algorithm::fastdtw, 100, 200).cells, 100U * 125U);
  EXPECT_EQ(memory_estimate(Algorithm::fastdtw, 300, 200, {1, 0}).cells, 200U * 9U);
  EXPECT_EQ(memory_estimate(Algorithm::linmdtw, 100, 200).cells, 600U);
  EXPECT_EQ(memory_estimate(Algorithm::mrmsdtw, 100, 200, {30, 777}).cells, 777U);
  EXPECT_EQ(memory_estimate(Algorithm::linmdtw, 100, 200).bytes, 2400U);
  for (std::size_t n : {6UL, 60UL, 6000UL}) {
    const double ratio =
        static_cast<double>(memory_estimate(Algorithm::textbook, n, n).cells) /
        static_cast<double>(memory_estimate(Algorithm::linmdtw, n, n).cells);
    EXPECT_DOUBLE_EQ(ratio, static_cast<double>(n) / 6.0);
  }
  EXPECT_THROW(memory_estimate(Algorithm::textbook, 0, 5), InvalidInput);
}

TEST(Units, BinaryAndDecimal) {
  EXPECT_DOUBLE_EQ(to_binary_unit(1536, 'K'), 1.5);
  EXPECT_DOUBLE_EQ(to_decimal_unit(1500, 'K'), 1.5);
  EXPECT_DOUBLE_EQ(to_binary_unit(1ULL << 30, 'G'), 1.0);
  EXPECT_EQ(format_bytes(512), "512 B");
  EXPECT_EQ(format_bytes(400000), "390.62 KiB (400.00 KB)");
  EXPECT_THROW(to_binary_unit(1, 'X'), InvalidInput);
}

TEST(Units, FramesFromSeconds) {
  EXPECT_EQ(frames_for(188, 43.0664), 8096U);
  EXPECT_EQ(frames_for(1.0, 10.0), 10U);
  EXPECT_THROW(frames_for(0, 10), InvalidInput);
}

TEST(Algorithm, ParseNames) {
  EXPECT_EQ(parse_algorithm("dtw"), Algorithm::textbook);
  for (auto a : {Algorithm::textbook, Algorithm::fastdtw, Algorithm::linmdtw, Algorithm::mrmsdtw})
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_THROW(parse_algorithm("magic"), InvalidInput);
}
