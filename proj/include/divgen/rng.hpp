#pragma once

#include <cmath>
#include <cstdint>

namespace divgen {

/// Seedable 64-bit integer-state random source (xoshiro256** seeded via
/// splitmix64). All floating-point sampling is built on top of integer
/// operations so that streams are bit-identical across platforms and
/// standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : state_) w = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint32_t uniform_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Gaussian via Box-Muller; two uniform draws per call, no cached spare.
  double gaussian(double mean, double sd) {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Derives an independent stream seed from (master, a, b). Used to give
  /// each method/repetition its own reproducible stream.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t a,
                              std::uint64_t b) {
    std::uint64_t x = master;
    std::uint64_t h = splitmix64(x);
    x = h ^ (a * 0x9E3779B97F4A7C15ULL);
    h = splitmix64(x);
    x = h ^ (b * 0xBF58476D1CE4E5B9ULL);
    return splitmix64(x);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace divgen
