#include "linmdtw/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace lmdtw {

std::string to_string(SynthKind k) {
  return k == SynthKind::warped_sine ? "warped-sine" : "random-walk";
}

SynthKind parse_synth_kind(const std::string& s) {
  if (s == "warped-sine" || s == "warped_sine") return SynthKind::warped_sine;
  if (s == "random-walk" || s == "random_walk") return SynthKind::random_walk;
  throw InvalidInput("unknown synth kind '" + s + "' (expected warped-sine or random-walk)");
}

double warp_time(double u, double strength, double span) {
  if (span <= 0.0) return u;
  const double w = 2.0 * std::numbers::pi / span;
  return u + strength / w * std::sin(w * u);
}

namespace {

struct Tone {
  double cycles;
  double phase;
  double amplitude;
};

// Continuous source signal per dimension, sampled at arbitrary times.
class Source {
 public:
  Source(const SynthOptions& o, std::mt19937_64& rng) : opts_(o) {
    const std::size_t n = o.length;
    if (o.kind == SynthKind::warped_sine) {
      std::uniform_real_distribution<double> cyc(1.5, 12.0);
      std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
      std::uniform_real_distribution<double> amp(0.5, 1.5);
      tones_.resize(o.dim * 3);
      for (auto& t : tones_) t = {cyc(rng), ph(rng), amp(rng)};
    } else {
      std::normal_distribution<double> step(0.0, 1.0);
      walk_.assign(n * o.dim, 0.0);
      for (std::size_t c = 0; c < o.dim; ++c) {
        double v = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          v += step(rng);
          walk_[t * o.dim + c] = v;
        }
      }
    }
  }

  double at(double t, std::size_t c) const {
    const double span = static_cast<double>(opts_.length);
    if (opts_.kind == SynthKind::warped_sine) {
      double v = 0.0;
      for (std::size_t h = 0; h < 3; ++h) {
        const Tone& tone = tones_[c * 3 + h];
        v += tone.amplitude *
             std::sin(2.0 * std::numbers::pi * tone.cycles * t / span + tone.phase);
      }
      return v;
    }
    // Linear interpolation of the walk; integer times hit samples exactly.
    const double maxt = static_cast<double>(opts_.length - 1);
    t = std::clamp(t, 0.0, maxt);
    const auto lo = static_cast<std::size_t>(std::floor(t));
    const double frac = t - static_cast<double>(lo);
    const double a = walk_[lo * opts_.dim + c];
    if (frac == 0.0 || lo + 1 >= opts_.length) return a;
    const double b = walk_[(lo + 1) * opts_.dim + c];
    return a + frac * (b - a);
  }

 private:
  const SynthOptions& opts_;
  std::vector<Tone> tones_;
  std::vector<double> walk_;
};

}  // namespace

std::pair<FeatureSeries, FeatureSeries> synthesize_pair(const SynthOptions& opts) {
  if (opts.length < 2) throw InvalidInput("synthetic length must be >= 2");
  if (opts.second_length == 1) throw InvalidInput("second length must be >= 2");
  if (opts.dim == 0) throw InvalidInput("synthetic dimension must be >= 1");
  if (!(opts.warp_strength >= 0.0 && opts.warp_strength < 1.0)) {
    throw InvalidInput("warp strength must lie in [0, 1)");
  }
  std::mt19937_64 rng(opts.seed);
  const Source src(opts, rng);

  const std::size_t m = opts.length;
  const std::size_t n = opts.second_length == 0 ? m : opts.second_length;
  const double span = static_cast<double>(m - 1);

  std::vector<float> a(m * opts.dim);
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t c = 0; c < opts.dim; ++c) {
      a[t * opts.dim + c] = static_cast<float>(src.at(static_cast<double>(t), c));
    }
  }
  std::vector<float> b(n * opts.dim);
  for (std::size_t t = 0; t < n; ++t) {
    const double u = n == m ? static_cast<double>(t)
                            : static_cast<double>(t) * span / static_cast<double>(n - 1);
    double warped = warp_time(u, opts.warp_strength, span);
    if (opts.warp_strength == 0.0) warped = u;
    for (std::size_t c = 0; c < opts.dim; ++c) {
      b[t * opts.dim + c] = static_cast<float>(src.at(warped, c));
    }
  }
  return {FeatureSeries(std::move(a), opts.dim, opts.fps),
          FeatureSeries(std::move(b), opts.dim, opts.fps)};
}

}  // namespace lmdtw
