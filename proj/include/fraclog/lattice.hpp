#pragma once

// Finite box truncations [-R, R]^d of the integer lattice, site indexing and
// the graph (l1) metric.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fraclog/errors.hpp"

namespace fraclog {

using Coord = int;

/// Sum of |x_i - y_i|; throws ConfigError on a dimension mismatch.
inline std::int64_t l1_distance(std::span<const Coord> x, std::span<const Coord> y) {
  if (x.size() != y.size()) {
    throw ConfigError("l1_distance: dimension mismatch (" + std::to_string(x.size()) +
                      " vs " + std::to_string(y.size()) + ")");
  }
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += std::llabs(static_cast<long long>(x[i]) - y[i]);
  }
  return acc;
}

inline std::int64_t l1_norm(std::span<const Coord> z) {
  std::int64_t acc = 0;
  for (Coord c : z) acc += std::llabs(static_cast<long long>(c));
  return acc;
}

/// Number of z in Z^d with |z|_1 = n, i.e. sum_k 2^k C(d,k) C(n-1,k-1).
inline std::uint64_t l1_sphere_count(int d, std::int64_t n) {
  if (d < 1) throw DomainError("l1_sphere_count: dimension must be >= 1");
  if (n < 1) throw DomainError("l1_sphere_count: radius must be >= 1");
  // Exact integer evaluation; k-th term counts vectors with exactly k nonzero
  // coordinates.
  const auto binom = [](std::int64_t a, std::int64_t b) -> double {
    if (b < 0 || b > a) return 0.0;
    double r = 1.0;
    for (std::int64_t i = 1; i <= b; ++i) r = r * static_cast<double>(a - b + i) / static_cast<double>(i);
    return r;
  };
  double total = 0.0;
  for (int k = 1; k <= d && k <= n; ++k) {
    total += std::ldexp(1.0, k) * binom(d, k) * binom(n - 1, k - 1);
  }
  if (total >= 0x1p63) throw CapacityError("l1_sphere_count: count overflows 64 bits");
  return static_cast<std::uint64_t>(std::llround(total));
}

/// Sites of [-R, R]^d in lexicographic order (first coordinate most
/// significant). Immutable once built.
class LatticeBox {
 public:
  LatticeBox(int d, int radius) : d_(d), radius_(radius) {
    if (d < 1) throw CapacityError("LatticeBox: dimension must be >= 1");
    if (radius < 0) throw DomainError("LatticeBox: radius must be >= 0");
    const std::uint64_t side = 2 * static_cast<std::uint64_t>(radius) + 1;
    std::uint64_t count = 1;
    constexpr std::uint64_t kMaxSites = std::uint64_t{1} << 32;
    for (int i = 0; i < d; ++i) {
      if (count > kMaxSites / side) throw CapacityError("LatticeBox: site count overflow");
      count *= side;
    }
    size_ = static_cast<std::size_t>(count);
    coords_.resize(size_ * static_cast<std::size_t>(d));
    std::vector<Coord> x(static_cast<std::size_t>(d), -radius);
    for (std::size_t i = 0; i < size_; ++i) {
      std::copy(x.begin(), x.end(), coords_.begin() + static_cast<std::ptrdiff_t>(i * d_));
      for (int k = d - 1; k >= 0; --k) {
        if (x[k] < radius) {
          ++x[k];
          break;
        }
        x[k] = -radius;
      }
    }
  }

  int dim() const noexcept { return d_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return size_; }

  std::span<const Coord> site(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }

  bool contains(std::span<const Coord> x) const noexcept {
    if (x.size() != static_cast<std::size_t>(d_)) return false;
    for (Coord c : x) {
      if (c < -radius_ || c > radius_) return false;
    }
    return true;
  }

  /// Inverse of site(); throws DomainError for sites outside the box.
  std::size_t index(std::span<const Coord> x) const {
    if (x.size() != static_cast<std::size_t>(d_)) throw ConfigError("LatticeBox::index: dimension mismatch");
    if (!contains(x)) throw DomainError("LatticeBox::index: site outside box");
    const std::size_t side = 2 * static_cast<std::size_t>(radius_) + 1;
    std::size_t idx = 0;
    for (Coord c : x) idx = idx * side + static_cast<std::size_t>(c + radius_);
    return idx;
  }

  /// Index of the origin.
  std::size_t center() const noexcept { return size_ / 2; }

  /// Largest l1 distance between two sites of the box.
  std::int64_t l1_diameter() const noexcept { return 2 * static_cast<std::int64_t>(radius_) * d_; }

  std::int64_t distance(std::size_t i, std::size_t j) const noexcept {
    const Coord* a = coords_.data() + i * static_cast<std::size_t>(d_);
    const Coord* b = coords_.data() + j * static_cast<std::size_t>(d_);
    std::int64_t acc = 0;
    for (int k = 0; k < d_; ++k) acc += std::abs(a[k] - b[k]);
    return acc;
  }

  friend bool operator==(const LatticeBox& a, const LatticeBox& b) noexcept {
    return a.d_ == b.d_ && a.radius_ == b.radius_;
  }

 private:
  int d_;
  int radius_;
  std::size_t size_ = 0;
  std::vector<Coord> coords_;
};

using BoxPtr = std::shared_ptr<const LatticeBox>;

inline BoxPtr enumerate_box(int d, int radius) { return std::make_shared<const LatticeBox>(d, radius); }

}  // namespace fraclog
