#include "linmdtw/core.hpp"

#include <algorithm>
#include <cstdlib>

namespace lmdtw {

std::string to_string(Precision p) { return p == Precision::f32 ? "32" : "64"; }

Precision parse_precision(const std::string& s) {
  if (s == "32" || s == "f32") return Precision::f32;
  if (s == "64" || s == "f64") return Precision::f64;
  throw InvalidInput("unknown precision '" + s + "' (expected 32 or 64)");
}

FeatureSeries::FeatureSeries(std::vector<float> data, std::size_t dim, double fps)
    : data_(std::move(data)), dim_(dim), fps_(fps) {
  if (dim_ == 0) throw InvalidInput("feature dimension must be >= 1");
  if (data_.empty()) throw InvalidInput("feature series must have at least one frame");
  if (data_.size() % dim_ != 0) throw InvalidInput("feature data is not a whole number of frames");
  if (!(fps_ > 0.0) || !std::isfinite(fps_)) throw InvalidInput("frame rate must be positive");
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!std::isfinite(data_[k])) {
      throw InvalidInput("non-finite feature value at frame " + std::to_string(k / dim_));
    }
  }
}

FeatureSeries FeatureSeries::from_rows(const std::vector<std::vector<float>>& rows, double fps) {
  if (rows.empty()) throw InvalidInput("feature series must have at least one frame");
  const std::size_t dim = rows.front().size();
  std::vector<float> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    if (r.size() != dim) throw InvalidInput("ragged feature rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return FeatureSeries(std::move(flat), dim, fps);
}

FeatureSeries FeatureSeries::from_values(const std::vector<float>& values, double fps) {
  return FeatureSeries(values, 1, fps);
}

FeatureSeries FeatureSeries::reversed() const {
  std::vector<float> out(data_.size());
  const std::size_t len = length();
  for (std::size_t i = 0; i < len; ++i) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>((len - 1 - i) * dim_), dim_,
                out.begin() + static_cast<std::ptrdiff_t>(i * dim_));
  }
  return FeatureSeries(std::move(out), dim_, fps_);
}

double euclidean_cost(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw InvalidInput("dimension mismatch: " + std::to_string(u.size()) + " vs " +
                       std::to_string(v.size()));
  }
  return CostFunction{}.operator()<double>(u.data(), v.data(), u.size());
}

namespace {

template <class T>
T fold_path(SeriesView x, SeriesView y, const WarpingPath& path, const CostFunction& cost) {
  T total = 0;
  for (const Cell& c : path) total += cost.operator()<T>(x.row(c.i), y.row(c.j), x.dim());
  return total;
}

}  // namespace

double path_cost(SeriesView x, SeriesView y, const WarpingPath& path, const CostFunction& cost,
                 Precision precision) {
  detail::require_same_dim(x, y);
  auto violations = validate_path(path, x.length(), y.length());
  if (!violations.empty()) throw InvalidInput("invalid warping path: " + violations.front().message);
  return precision == Precision::f32 ? fold_path<float>(x, y, path, cost)
                                     : fold_path<double>(x, y, path, cost);
}

double path_cost(const FeatureSeries& x, const FeatureSeries& y, const WarpingPath& path,
                 const CostFunction& cost, Precision precision) {
  return path_cost(x.view(), y.view(), path, cost, precision);
}

std::vector<PathViolation> validate_path(const WarpingPath& path, std::size_t m, std::size_t n) {
  std::vector<PathViolation> out;
  if (path.empty()) {
    out.push_back({ViolationKind::empty, 0, "path is empty"});
    return out;
  }
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (path[k].i >= m || path[k].j >= n) {
      out.push_back({ViolationKind::out_of_range, k,
                     "cell (" + std::to_string(path[k].i) + "," + std::to_string(path[k].j) +
                         ") outside " + std::to_string(m) + "x" + std::to_string(n) + " grid"});
    }
  }
  if (path.front() != Cell{0, 0}) {
    out.push_back({ViolationKind::bad_start, 0, "path does not start at (0,0)"});
  }
  if (m == 0 || n == 0 || path.back() != Cell{m - 1, n - 1}) {
    out.push_back({ViolationKind::bad_end, path.size() - 1, "path does not end at (M-1,N-1)"});
  }
  for (std::size_t k = 1; k < path.size(); ++k) {
    const Cell a = path[k - 1];
    const Cell b = path[k];
    const bool ok = b.i >= a.i && b.j >= a.j && b.i - a.i <= 1 && b.j - a.j <= 1 && b != a;
    if (!ok) {
      out.push_back({ViolationKind::illegal_step, k,
                     "illegal step (" + std::to_string(a.i) + "," + std::to_string(a.j) + ")->(" +
                         std::to_string(b.i) + "," + std::to_string(b.j) + ")"});
    }
  }
  return out;
}

namespace detail {

void require_same_dim(SeriesView x, SeriesView y) {
  if (x.dim() != y.dim()) {
    throw InvalidInput("feature dimension mismatch: " + std::to_string(x.dim()) + " vs " +
                       std::to_string(y.dim()));
  }
}

void require_nonempty(SeriesView x, const char* what) {
  if (x.length() == 0) throw InvalidInput(std::string(what) + " must have at least one frame");
}

}  // namespace detail

}  // namespace lmdtw
