#include "linmdtw/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace lmdtw {

namespace {

void put_u16(std::ostream& os, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
  os.write(b, 2);
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  os.write(b, 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t read_some(std::istream& is, unsigned char* dst, std::uint64_t n) {
  is.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  return static_cast<std::uint64_t>(is.gcount());
}

}  // namespace

void save_features(const FeatureSeries& series, std::ostream& os) {
  if (series.length() > std::numeric_limits<std::uint32_t>::max() ||
      series.dim() > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidInput("series too large for the feature file format");
  }
  os.write(kFeatureMagic, 4);
  put_u16(os, kFeatureVersion);
  put_u32(os, static_cast<std::uint32_t>(series.length()));
  put_u32(os, static_cast<std::uint32_t>(series.dim()));
  put_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(series.fps())));
  for (float v : series.data()) put_u32(os, std::bit_cast<std::uint32_t>(v));
  if (!os) throw std::runtime_error("failed writing feature data");
}

void save_features(const FeatureSeries& series, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw InvalidInput("cannot open '" + file.string() + "' for writing");
  save_features(series, os);
}

FeatureSeries load_features(std::istream& is) {
  std::array<unsigned char, kFeatureHeaderBytes> head{};
  const auto got = read_some(is, head.data(), head.size());
  if (got == 0 || std::memcmp(head.data(), kFeatureMagic, std::min<std::uint64_t>(got, 4)) != 0) {
    throw FormatError("bad magic, expected \"LMDW\"", 0);
  }
  if (got < head.size()) throw FormatError("truncated header", got);
  const std::uint16_t version = static_cast<std::uint16_t>(head[4] | (head[5] << 8));
  if (version != kFeatureVersion) {
    throw FormatError("unsupported version " + std::to_string(version), 4);
  }
  const std::uint32_t rows = get_u32(&head[6]);
  const std::uint32_t cols = get_u32(&head[10]);
  const float fps = std::bit_cast<float>(get_u32(&head[14]));
  if (rows == 0) throw FormatError("zero frame count", 6);
  if (cols == 0) throw FormatError("zero feature dimension", 10);
  if (!std::isfinite(fps) || !(fps > 0.0F)) throw FormatError("frame rate must be positive", 14);

  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  std::vector<float> data;
  std::vector<unsigned char> raw;
  try {
    raw.resize(count * 4);
    data.resize(count);
  } catch (const std::bad_alloc&) {
    throw FormatError("payload size " + std::to_string(count * 4) + " bytes cannot be allocated",
                      6);
  }
  const auto payload = read_some(is, raw.data(), raw.size());
  if (payload < raw.size()) {
    throw FormatError("truncated payload: header declares " + std::to_string(raw.size()) +
                          " bytes, found " + std::to_string(payload),
                      kFeatureHeaderBytes + payload);
  }
  for (std::uint64_t k = 0; k < count; ++k) {
    const float v = std::bit_cast<float>(get_u32(&raw[k * 4]));
    if (!std::isfinite(v)) throw FormatError("non-finite value", kFeatureHeaderBytes + 4 * k);
    data[k] = v;
  }
  return FeatureSeries(std::move(data), cols, static_cast<double>(fps));
}

FeatureSeries load_features(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw InvalidInput("cannot open '" + file.string() + "'");
  return load_features(is);
}

namespace {

// Shortest decimal form that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_path_file(std::ostream& os, const PathFile& file) {
  const auto& h = file.header;
  os << "# M=" << h.rows << " N=" << h.cols << " fps=" << shortest(h.fps)
     << " cost=" << shortest(h.cost) << " algo=" << (h.algo.empty() ? "unknown" : h.algo) << '\n';
  for (const Cell& c : file.path) os << c.i << ',' << c.j << '\n';
  if (!os) throw std::runtime_error("failed writing path file");
}

void write_path_file(const std::filesystem::path& file, const PathFile& contents) {
  std::ofstream os(file, std::ios::trunc);
  if (!os) throw InvalidInput("cannot open '" + file.string() + "' for writing");
  write_path_file(os, contents);
}

namespace {

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    std::istringstream in(text);
    in >> value;
    if (!in || !in.eof()) throw InvalidInput("bad " + what + " '" + text + "' in path file");
  } else {
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      throw InvalidInput("bad " + what + " '" + text + "' in path file");
    }
  }
  return value;
}

}  // namespace

PathFile read_path_file(std::istream& is) {
  PathFile out;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) {
    throw InvalidInput("path file must start with a '# M=... N=...' header");
  }
  bool have_m = false;
  bool have_n = false;
  std::istringstream fields(line.substr(2));
  std::string field;
  while (fields >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (key == "M") {
      out.header.rows = parse_number<std::size_t>(val, "M");
      have_m = true;
    } else if (key == "N") {
      out.header.cols = parse_number<std::size_t>(val, "N");
      have_n = true;
    } else if (key == "fps") {
      out.header.fps = parse_number<double>(val, "fps");
    } else if (key == "cost") {
      out.header.cost = parse_number<double>(val, "cost");
    } else if (key == "algo") {
      out.header.algo = val;
    }
  }
  if (!have_m || !have_n) throw InvalidInput("path file header lacks M or N");

  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InvalidInput("line " + std::to_string(lineno) + ": expected 'i,j'");
    }
    out.path.push_back({parse_number<std::size_t>(line.substr(0, comma), "row index"),
                        parse_number<std::size_t>(line.substr(comma + 1), "column index")});
  }
  const auto violations = validate_path(out.path, out.header.rows, out.header.cols);
  if (!violations.empty()) {
    throw InvalidInput("path file does not hold a valid warping path: " +
                       violations.front().message);
  }
  return out;
}

PathFile read_path_file(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw InvalidInput("cannot open '" + file.string() + "'");
  return read_path_file(is);
}

}  // namespace lmdtw
