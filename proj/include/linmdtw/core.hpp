#pragma once

#include <atomic>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmdtw {

/// 22050 Hz audio analysed with a hop of 512 samples.
inline constexpr double kDefaultFps = 22050.0 / 512.0;

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::uint64_t requested_bytes)
      : std::runtime_error(what), requested_bytes_(requested_bytes) {}
  std::uint64_t requested_bytes() const noexcept { return requested_bytes_; }

 private:
  std::uint64_t requested_bytes_;
};

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t byte_offset)
      : std::runtime_error(what + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  std::uint64_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::uint64_t byte_offset_;
};

/// Accumulation precision. Features are always stored as 32-bit floats.
enum class Precision { f32, f64 };

std::string to_string(Precision p);
Precision parse_precision(const std::string& s);

struct Cell {
  std::size_t i = 0;
  std::size_t j = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

using WarpingPath = std::vector<Cell>;

/// Non-owning window onto a contiguous range of frames.
class SeriesView {
 public:
  SeriesView() = default;
  SeriesView(const float* data, std::size_t length, std::size_t dim)
      : data_(data), length_(length), dim_(dim) {}

  std::size_t length() const noexcept { return length_; }
  std::size_t dim() const noexcept { return dim_; }
  const float* row(std::size_t i) const noexcept { return data_ + i * dim_; }
  std::span<const float> frame(std::size_t i) const noexcept { return {row(i), dim_}; }

  /// Frames [begin, begin + count).
  SeriesView subrange(std::size_t begin, std::size_t count) const noexcept {
    return {data_ + begin * dim_, count, dim_};
  }

 private:
  const float* data_ = nullptr;
  std::size_t length_ = 0;
  std::size_t dim_ = 0;
};

/// Time series of fixed-dimension feature vectors. Immutable once built.
class FeatureSeries {
 public:
  /// `data` is row-major, length*dim values. Throws InvalidInput on empty,
  /// ragged, or non-finite input.
  FeatureSeries(std::vector<float> data, std::size_t dim, double fps = kDefaultFps);

  static FeatureSeries from_rows(const std::vector<std::vector<float>>& rows,
                                 double fps = kDefaultFps);
  /// One-dimensional series.
  static FeatureSeries from_values(const std::vector<float>& values,
                                   double fps = kDefaultFps);

  std::size_t length() const noexcept { return data_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  double fps() const noexcept { return fps_; }
  std::span<const float> frame(std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<const float> data() const noexcept { return data_; }
  SeriesView view() const noexcept { return {data_.data(), length(), dim_}; }

  FeatureSeries reversed() const;

 private:
  std::vector<float> data_;
  std::size_t dim_;
  double fps_;
};

enum class CostKind { euclidean };

struct CostFunction {
  CostKind kind = CostKind::euclidean;

  template <class T>
  T operator()(const float* u, const float* v, std::size_t dim) const noexcept {
    T sum = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      const T diff = static_cast<T>(u[d]) - static_cast<T>(v[d]);
      sum += diff * diff;
    }
    return std::sqrt(sum);
  }
};

/// ||u - v||_2 in double precision.
double euclidean_cost(std::span<const float> u, std::span<const float> v);

/// Sum of C over the path, accumulated in path order at the given precision.
double path_cost(SeriesView x, SeriesView y, const WarpingPath& path,
                 const CostFunction& cost = {}, Precision precision = Precision::f64);
double path_cost(const FeatureSeries& x, const FeatureSeries& y, const WarpingPath& path,
                 const CostFunction& cost = {}, Precision precision = Precision::f64);

enum class ViolationKind { empty, bad_start, bad_end, illegal_step, out_of_range };

struct PathViolation {
  ViolationKind kind;
  std::size_t index;  // position in the path
  std::string message;
};

/// Empty result means the path is a valid warping path for an M x N grid.
std::vector<PathViolation> validate_path(const WarpingPath& path, std::size_t m, std::size_t n);

inline bool is_valid_path(const WarpingPath& path, std::size_t m, std::size_t n) {
  return validate_path(path, m, n).empty();
}

/// Live/peak count of retained DP values (accumulated or raw cost entries).
class RetainedCounter {
 public:
  void acquire(std::uint64_t n) noexcept {
    const auto now = live_.fetch_add(n, std::memory_order_relaxed) + n;
    auto prev = peak_.load(std::memory_order_relaxed);
    while (now > prev && !peak_.compare_exchange_weak(prev, now, std::memory_order_relaxed)) {
    }
  }
  void release(std::uint64_t n) noexcept { live_.fetch_sub(n, std::memory_order_relaxed); }
  std::uint64_t live() const noexcept { return live_.load(std::memory_order_relaxed); }
  std::uint64_t peak() const noexcept { return peak_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> live_{0};
  std::atomic<std::uint64_t> peak_{0};
};

/// RAII registration of `n` retained values with a (possibly absent) counter.
class RetainedLease {
 public:
  RetainedLease() = default;
  RetainedLease(RetainedCounter* counter, std::uint64_t n) : counter_(counter), n_(n) {
    if (counter_) counter_->acquire(n_);
  }
  RetainedLease(RetainedLease&& o) noexcept : counter_(o.counter_), n_(o.n_) {
    o.counter_ = nullptr;
    o.n_ = 0;
  }
  RetainedLease& operator=(RetainedLease&& o) noexcept {
    if (this != &o) {
      reset();
      counter_ = o.counter_;
      n_ = o.n_;
      o.counter_ = nullptr;
      o.n_ = 0;
    }
    return *this;
  }
  RetainedLease(const RetainedLease&) = delete;
  RetainedLease& operator=(const RetainedLease&) = delete;
  ~RetainedLease() { reset(); }

  /// Give back part of the lease early.
  void shrink(std::uint64_t by) noexcept {
    if (by > n_) by = n_;
    if (counter_) counter_->release(by);
    n_ -= by;
  }
  void reset() noexcept { shrink(n_); }
  std::uint64_t size() const noexcept { return n_; }

 private:
  RetainedCounter* counter_ = nullptr;
  std::uint64_t n_ = 0;
};

/// Output of every alignment algorithm in the library.
struct AlignmentResult {
  double cost = 0.0;
  WarpingPath path;
  std::uint64_t cells_processed = 0;
  /// 2*M*N, the progress denominator of the divide-and-conquer aligner.
  std::uint64_t cells_budget_2mn = 0;
  Precision precision = Precision::f64;
  /// Peak accumulated + raw cost values held at once.
  std::uint64_t peak_retained_cells = 0;
  /// Peak 2-bit backpointer entries held at once (oracle and windowed solves).
  std::uint64_t peak_backpointer_cells = 0;
};

namespace detail {
void require_same_dim(SeriesView x, SeriesView y);
void require_nonempty(SeriesView x, const char* what);
}  // namespace detail

}  // namespace lmdtw
