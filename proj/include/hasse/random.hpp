#pragma once

#include <cstdint>
#include <random>

namespace hasse {

/// Uniform integer in [0, n) by rejection.  std::uniform_int_distribution
/// is not specified bit-for-bit, so streams would differ across standard
/// libraries; mt19937_64 output itself is specified.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % n;
  }
}

}  // namespace hasse
