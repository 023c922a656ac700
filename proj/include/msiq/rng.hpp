#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace msiq {

/// Deterministic random source. All distributions are implemented on top of
/// the raw mt19937_64 stream instead of std::*_distribution, whose output is
/// implementation-defined; results are therefore reproducible across
/// standard-library versions for a fixed seed and call sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer on [lo, hi] inclusive.
  long uniform_int(long lo, long hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
  }

  /// Box-Muller; one pair of uniforms per draw, spare discarded so that the
  /// stream position is a pure function of the draw count.
  double normal(double mean, double sd) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * M_PI * u2);
  }

  /// Gamma(shape, 1) via Marsaglia-Tsang, with the boosting trick for
  /// shape < 1.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
    if (shape < 1.0) {
      const double u = uniform01();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal(0.0, 1.0);
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
        return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  std::vector<double> dirichlet(const std::vector<double>& concentration) {
    std::vector<double> out(concentration.size());
    double total = 0.0;
    for (std::size_t j = 0; j < concentration.size(); ++j) {
      out[j] = gamma(concentration[j]);
      total += out[j];
    }
    for (double& v : out) v /= total;
    return out;
  }

  /// Index drawn proportionally to non-negative weights (need not be
  /// normalized). At least one weight must be positive.
  int categorical(const std::vector<double>& weights) {
    return categorical(weights.data(), weights.size());
  }

  int categorical(const double* weights, std::size_t n) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += weights[j];
    if (!(total > 0.0))
      throw std::invalid_argument("categorical: no positive weight");
    double u = uniform01() * total;
    for (std::size_t j = 0; j < n; ++j) {
      u -= weights[j];
      if (u < 0.0) return static_cast<int>(j);
    }
    // Rounding pushed u past the last positive weight.
    for (std::size_t j = n; j-- > 0;)
      if (weights[j] > 0.0) return static_cast<int>(j);
    return 0;
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 step, used to mix indices into derived seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for per-gene work streams: master XOR stable gene index, so
/// concurrent per-gene chains reproduce regardless of scheduling.
inline std::uint64_t gene_seed(std::uint64_t master, std::uint64_t gene_index) {
  return master ^ gene_index;
}

/// Seed for a (gene, replicate, scenario, setting, stream) cell of a sweep;
/// the packed index is mixed so that neighbouring cells decorrelate.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t gene,
                                 std::uint64_t replicate, std::uint64_t scenario,
                                 std::uint64_t setting, std::uint64_t stream) {
  std::uint64_t packed = gene;
  packed = packed * 257 + replicate;
  packed = packed * 17 + scenario;
  packed = packed * 17 + setting;
  packed = packed * 17 + stream;
  return master ^ splitmix64(packed);
}

}  // namespace msiq
