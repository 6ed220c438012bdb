#pragma once

// Deterministic synthetic series pairs for tests and the CLI.

#include <cstdint>
#include <string>
#include <utility>

#include "linmdtw/core.hpp"

namespace lmdtw {

enum class SynthKind { warped_sine, random_walk };

std::string to_string(SynthKind k);
/// Accepts warped-sine / random-walk (underscores allowed).
SynthKind parse_synth_kind(const std::string& s);

struct SynthOptions {
  SynthKind kind = SynthKind::warped_sine;
  std::size_t length = 256;
  /// Length of the second series; 0 means same as `length`.
  std::size_t second_length = 0;
  std::uint64_t seed = 0;
  /// In [0, 1). The second series samples the first at
  ///   u + s * T / (2 pi) * sin(2 pi u / T),  T = length - 1,
  /// which fixes both endpoints and stays strictly increasing.
  double warp_strength = 0.3;
  std::size_t dim = 4;
  double fps = kDefaultFps;
};

/// Same options, same output, bit for bit. Strength 0 with equal lengths
/// gives two identical series.
std::pair<FeatureSeries, FeatureSeries> synthesize_pair(const SynthOptions& opts);

/// Time map used for the second series, on the first series' frame axis.
double warp_time(double u, double strength, double span);

}  // namespace lmdtw
