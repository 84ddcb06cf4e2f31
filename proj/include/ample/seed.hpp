#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace ample {

/// SplitMix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `index` under `parent`. Sweeps use
/// sub_seed(sub_seed(base, config_index), sample_index), so every sample is
/// reproducible on its own regardless of which thread draws it.
constexpr std::uint64_t sub_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(parent) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

/// mt19937_64 with portable conversions (std distributions are
/// implementation-defined, these are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on [-1, 1).
  double symmetric() { return 2.0 * unit() - 1.0; }
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  /// Uniform on the closed unit disc (rejection from the square).
  std::complex<double> disc() {
    for (;;) {
      std::complex<double> z(symmetric(), symmetric());
      if (std::norm(z) <= 1.0) return z;
    }
  }
  /// Standard normal via Box-Muller; one value per call.
  double normal() {
    double u1 = unit();
    while (u1 <= 0.0) u1 = unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ample
