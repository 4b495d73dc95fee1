#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace tailcop {

// Iterated logarithms with the floor-at-e convention:
//   log1(u) = log(u v e),  log2(u) = log1(log1(u)).
// Note: log2 here is the iterated logarithm, not the base-2 logarithm.
inline double log1(double u) { return std::log(std::max(u, std::exp(1.0))); }
inline double log2(double u) { return log1(log1(u)); }

// Smallest integer k with k/n >= p (i.e. ceil(n*p)), clamped to [0, n].
// The 1e-9 guard keeps arguments computed as i/n in floating point on rank i.
inline std::int64_t rank_ceil(double p, std::int64_t n) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const auto k = static_cast<std::int64_t>(
      std::ceil(static_cast<double>(n) * p - 1e-9));
  return std::clamp<std::int64_t>(k, 1, n);
}

}  // namespace tailcop
