#pragma once

// On-disk formats shared with the feature extractor.
//
// Feature file, little-endian:
//   offset 0   char[4]  "LMDW"
//   offset 4   u16      version (1)
//   offset 6   u32      rows (frames)
//   offset 10  u32      cols (feature dimension)
//   offset 14  f32      frames per second
//   offset 18  f32[rows*cols] row-major payload
//
// Path file, text:
//   # M=<M> N=<N> fps=<fps> cost=<cost> algo=<name>
//   i,j            (one pair per line, in path order)

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "linmdtw/core.hpp"

namespace lmdtw {

inline constexpr char kFeatureMagic[4] = {'L', 'M', 'D', 'W'};
inline constexpr std::uint16_t kFeatureVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 18;

void save_features(const FeatureSeries& series, std::ostream& os);
void save_features(const FeatureSeries& series, const std::filesystem::path& file);
/// Throws FormatError (with byte offset) on bad magic or version, truncated
/// payload, or non-finite values.
FeatureSeries load_features(std::istream& is);
FeatureSeries load_features(const std::filesystem::path& file);

struct PathFileHeader {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double fps = kDefaultFps;
  double cost = 0.0;
  std::string algo;
};

struct PathFile {
  PathFileHeader header;
  WarpingPath path;
};

void write_path_file(std::ostream& os, const PathFile& file);
void write_path_file(const std::filesystem::path& file, const PathFile& contents);
/// Parses and validates the path against the header's M and N.
PathFile read_path_file(std::istream& is);
PathFile read_path_file(const std::filesystem::path& file);

}  // namespace lmdtw
