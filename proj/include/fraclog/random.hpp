#pragma once

#include <cstdint>
#include <random>

namespace fraclog::detail {

// Deterministic doubles in [0, 1) from a 64-bit engine, independent of the
// standard library's distribution implementations.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : eng_(seed) {}
  double next() { return static_cast<double>(eng_() >> 11) * 0x1p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fraclog::detail
