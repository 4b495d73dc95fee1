#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tailcop {

// SplitMix64 finalizer. Used to turn (seed, stream) pairs into well-mixed
// generator seeds so that replication r can run on its own stream.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

// Deterministic generator. Uniform draws are strictly inside (0,1) and are
// produced from the raw 64-bit output, so results do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed ^ 0xD1B54A32D192ED03ULL)) {}

  static Rng stream(std::uint64_t seed, std::uint64_t r) {
    return Rng(derive_stream(seed, r));
  }

  double uniform_open01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Box-Muller; two uniforms per draw, no cached state.
  double normal() {
    const double a = uniform_open01();
    const double b = uniform_open01();
    return std::sqrt(-2.0 * std::log(a)) * std::cos(kTwoPi * b);
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::mt19937_64 gen_;
};

}  // namespace tailcop
