#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace cksvar {

// Counter-based generator used throughout: the splitmix64 stream
//   state_i = seed + i * 0x9E3779B97F4A7C15,  output_i = mix64(state_i),
// with mix64 the splitmix64 finalizer below. Normals come from Box-Muller on
// uniforms u = ((output >> 11) + 0.5) * 2^-53, strictly inside (0,1). Any
// implementation that reproduces these steps reproduces every stream bit for
// bit; seeds for independent streams are derived with derive_seed, never by
// splitting one stream positionally.

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Fold one token into a seed: mix64(seed ^ mix64(token + golden)).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t token) {
  return mix64(seed ^ mix64(token + kGoldenGamma));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(seed_ + counter_ * kGoldenGamma);
  }

  /// Uniform strictly inside (0,1), 53-bit resolution.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  void fill_normal(std::span<double> out) {
    for (double& v : out) v = next_normal();
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cksvar
