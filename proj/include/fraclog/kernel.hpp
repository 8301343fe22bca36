#pragma once

// The symmetric kernel w_s(z) = |z|_1^{-(d+2s)}, its total mass over Z^d \ {0},
// and the boundary defects that make quadratic forms of zero-extended fields
// exact on the whole lattice.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fraclog/errors.hpp"
#include "fraclog/lattice.hpp"
#include "fraclog/summation.hpp"

namespace fraclog {

enum class KernelForm {
  power_law,  ///< w(z) = |z|_1^{-(d+2s)}
};

struct KernelSpec {
  double s = 0.5;
  int d = 1;
  double c_low = 1.0;
  double c_high = 1.0;
  KernelForm form = KernelForm::power_law;

  double exponent() const noexcept { return d + 2.0 * s; }

  void validate() const {
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("kernel: s must lie in (0,1)", "kernel.s");
    if (d < 1) throw ConfigError("kernel: dimension must be >= 1", "lattice.d");
    if (!(c_low > 0.0) || !(c_low <= c_high)) throw ConfigError("kernel: need 0 < c_low <= c_high");
    if (form == KernelForm::power_law && (c_low != 1.0 || c_high != 1.0)) {
      throw ConfigError("kernel: the power-law form has c_low = c_high = 1");
    }
  }
};

/// Radial profile of the kernel at l1 radius n >= 1.
inline double radial_weight(const KernelSpec& spec, std::int64_t n) {
  if (n < 1) throw DomainError("kernel weight is undefined on the diagonal (z = 0)");
  return std::pow(static_cast<double>(n), -spec.exponent());
}

inline double weight(const KernelSpec& spec, std::span<const Coord> z) {
  spec.validate();
  if (z.size() != static_cast<std::size_t>(spec.d)) throw ConfigError("weight: offset dimension mismatch");
  return radial_weight(spec, l1_norm(z));
}

namespace detail {

// Coefficients c_j with l1_sphere_count(d, n) = sum_j c_j n^j for all n >= 1.
inline std::vector<double> sphere_count_polynomial(int d) {
  std::vector<double> total(static_cast<std::size_t>(d), 0.0);
  for (int k = 1; k <= d; ++k) {
    // 2^k C(d,k) * prod_{i=1}^{k-1} (n - i) / (k-1)!
    std::vector<double> poly{1.0};
    double denom = 1.0;
    for (int i = 1; i <= k - 1; ++i) {
      std::vector<double> next(poly.size() + 1, 0.0);
      for (std::size_t j = 0; j < poly.size(); ++j) {
        next[j + 1] += poly[j];
        next[j] -= static_cast<double>(i) * poly[j];
      }
      poly = std::move(next);
      denom *= i;
    }
    double binom_dk = 1.0;
    for (int i = 1; i <= k; ++i) binom_dk = binom_dk * (d - k + i) / i;
    const double scale = std::ldexp(1.0, k) * binom_dk / denom;
    for (std::size_t j = 0; j < poly.size(); ++j) total[j] += scale * poly[j];
  }
  return total;
}

struct TailBracket {
  double estimate;
  double error;
};

// sum_{n > r} n^{-b} for b > 1 by Euler-Maclaurin through the B2 term. For
// x^{-b} the remainder is bounded by the first omitted term |f'''(r)|/720.
inline TailBracket power_tail(double b, double r) {
  const double integral = std::pow(r, 1.0 - b) / (b - 1.0);
  const double f = std::pow(r, -b);
  const double fp = -b * f / r;
  const double f3 = -b * (b + 1.0) * (b + 2.0) * f / (r * r * r);
  return {integral - 0.5 * f - fp / 12.0, std::fabs(f3) / 720.0};
}

}  // namespace detail

struct MassOptions {
  /// Largest shell radius summed exactly; 0 selects 1e5 (d = 1) or 1e3 (d >= 2).
  std::int64_t max_radius = 0;
  std::int64_t initial_radius = 64;
};

struct MassEstimate {
  double value = 0.0;        ///< S = sum_{z != 0} w(z)
  double error_bound = 0.0;  ///< certified |S - value|
  std::int64_t radius = 0;   ///< exact shells summed
};

/// Shell sum of w over 1 <= |z|_1 <= r (compensated, increasing n).
inline double shell_partial_sum(const KernelSpec& spec, std::int64_t r) {
  CompensatedSum acc;
  for (std::int64_t n = 1; n <= r; ++n) {
    acc += static_cast<double>(l1_sphere_count(spec.d, n)) * radial_weight(spec, n);
  }
  return acc.value();
}

/// Tail sum_{|z|_1 > r} w(z) estimated from the sphere-count polynomial.
inline detail::TailBracket shell_tail(const KernelSpec& spec, std::int64_t r) {
  const auto coeffs = detail::sphere_count_polynomial(spec.d);
  double est = 0.0;
  double err = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0.0) continue;
    const auto t = detail::power_tail(spec.exponent() - static_cast<double>(j), static_cast<double>(r));
    est += coeffs[j] * t.estimate;
    err += std::fabs(coeffs[j]) * t.error;
  }
  return {est, err};
}

/// Total kernel mass with a certified error; doubles the exact radius until
/// the bound is at most target_eps.
inline MassEstimate total_mass(const KernelSpec& spec, double target_eps, MassOptions opts = {}) {
  spec.validate();
  if (!(target_eps > 0.0)) throw DomainError("total_mass: target_eps must be positive");
  const std::int64_t max_radius = opts.max_radius > 0 ? opts.max_radius : (spec.d == 1 ? 100000 : 1000);
  std::int64_t r = std::min(std::max<std::int64_t>(opts.initial_radius, 1), max_radius);
  CompensatedSum partial;
  std::int64_t summed = 0;
  MassEstimate best;
  best.error_bound = std::numeric_limits<double>::infinity();
  while (true) {
    for (std::int64_t n = summed + 1; n <= r; ++n) {
      partial += static_cast<double>(l1_sphere_count(spec.d, n)) * radial_weight(spec, n);
    }
    summed = r;
    const auto tail = shell_tail(spec, r);
    const double value = partial.value() + tail.estimate;
    const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * value;
    const double bound = tail.error + rounding;
    if (bound < best.error_bound) best = {value, bound, r};
    if (bound <= target_eps) return best;
    if (r >= max_radius) break;
    r = std::min(2 * r, max_radius);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "total_mass: target %.3g not reached within radius %lld (achieved %.3g)",
                target_eps, static_cast<long long>(max_radius), best.error_bound);
  throw ToleranceError(buf, best.error_bound);
}

/// Radial kernel tabulated up to an l1 cutoff, with its certified total mass.
class KernelTable {
 public:
  KernelTable(const KernelSpec& spec, std::int64_t cutoff_rho, double target_eps = 1e-12,
              MassOptions opts = {})
      : spec_(spec), cutoff_(cutoff_rho) {
    spec_.validate();
    if (cutoff_rho < 1) throw ConfigError("kernel: cutoff radius must be >= 1", "kernel.cutoff");
    mass_ = fraclog::total_mass(spec_, target_eps, opts);
    weights_.assign(static_cast<std::size_t>(cutoff_rho) + 1, 0.0);
    shell_partial_.assign(static_cast<std::size_t>(cutoff_rho) + 1, 0.0);
    CompensatedSum acc;
    for (std::int64_t n = 1; n <= cutoff_rho; ++n) {
      weights_[static_cast<std::size_t>(n)] = radial_weight(spec_, n);
      acc += static_cast<double>(l1_sphere_count(spec_.d, n)) * weights_[static_cast<std::size_t>(n)];
      shell_partial_[static_cast<std::size_t>(n)] = acc.value();
    }
  }

  const KernelSpec& spec() const noexcept { return spec_; }
  std::int64_t cutoff() const noexcept { return cutoff_; }
  double total_mass() const noexcept { return mass_.value; }
  double tail_error_bound() const noexcept { return mass_.error_bound; }
  const MassEstimate& mass() const noexcept { return mass_; }

  /// w at l1 radius n, 1 <= n <= cutoff.
  double at_radius(std::int64_t n) const {
    if (n < 1) throw DomainError("kernel weight is undefined on the diagonal (z = 0)");
    if (n > cutoff_) throw ConfigError("kernel table cutoff too small for requested offset", "kernel.cutoff");
    return weights_[static_cast<std::size_t>(n)];
  }

  double operator()(std::span<const Coord> z) const {
    if (z.size() != static_cast<std::size_t>(spec_.d)) throw ConfigError("kernel table: offset dimension mismatch");
    return at_radius(l1_norm(z));
  }

  /// sum_{|z|_1 > r} w(z), for 0 <= r <= cutoff.
  double tail_mass(std::int64_t r) const {
    if (r < 0 || r > cutoff_) throw DomainError("tail_mass: radius outside table");
    return std::max(0.0, mass_.value - shell_partial_[static_cast<std::size_t>(r)]);
  }

  /// CSV audit dump: one row per offset with 1 <= |z|_1 <= cutoff, columns
  /// z1..zd,weight, offsets in lexicographic order.
  void write_csv(std::ostream& os) const {
    const int d = spec_.d;
    for (int k = 0; k < d; ++k) os << 'z' << (k + 1) << ',';
    os << "weight\n";
    const auto rho = static_cast<Coord>(cutoff_);
    std::vector<Coord> z(static_cast<std::size_t>(d), -rho);
    char buf[40];
    while (true) {
      const auto n = l1_norm(z);
      if (n >= 1 && n <= cutoff_) {
        for (Coord c : z) os << c << ',';
        std::snprintf(buf, sizeof buf, "%.17g", at_radius(n));
        os << buf << '\n';
      }
      int k = d - 1;
      for (; k >= 0; --k) {
        if (z[static_cast<std::size_t>(k)] < rho) {
          ++z[static_cast<std::size_t>(k)];
          break;
        }
        z[static_cast<std::size_t>(k)] = -rho;
      }
      if (k < 0) break;
    }
  }

 private:
  KernelSpec spec_;
  std::int64_t cutoff_;
  MassEstimate mass_;
  std::vector<double> weights_;
  std::vector<double> shell_partial_;
};

/// Kernel restricted to a box: pair weights by index and the cached
/// boundary defect sigma(x) = sum_{y outside box} w(x - y).
class BoxKernel {
 public:
  BoxKernel(BoxPtr box, std::shared_ptr<const KernelTable> table) : box_(std::move(box)), table_(std::move(table)) {
    if (!box_ || !table_) throw ConfigError("BoxKernel: null box or table");
    if (box_->dim() != table_->spec().d) throw ConfigError("BoxKernel: box and kernel dimensions differ", "lattice.d");
    if (table_->cutoff() < box_->l1_diameter()) {
      throw ConfigError("kernel table cutoff is smaller than the box l1 diameter", "kernel.cutoff");
    }
    const std::size_t n = box_->size();
    if (n <= kDenseLimit) {
      dense_.assign(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) dense_[i * n + j] = table_->at_radius(box_->distance(i, j));
        }
      }
    }
    defect_.resize(n);
    const double mass = table_->total_mass();
    for (std::size_t i = 0; i < n; ++i) {
      CompensatedSum inside;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) inside += pair_weight(i, j);
      }
      defect_[i] = std::max(0.0, mass - inside.value());
    }
  }

  /// Boxes up to this many sites keep a dense pair-weight matrix.
  static constexpr std::size_t kDenseLimit = 2048;

  const LatticeBox& box() const noexcept { return *box_; }
  const BoxPtr& box_ptr() const noexcept { return box_; }
  const KernelTable& table() const noexcept { return *table_; }
  double total_mass() const noexcept { return table_->total_mass(); }
  std::size_t size() const noexcept { return box_->size(); }

  /// w(x_i - x_j) for i != j.
  double pair_weight(std::size_t i, std::size_t j) const {
    if (!dense_.empty()) return dense_[i * box_->size() + j];
    return table_->at_radius(box_->distance(i, j));
  }

  double defect(std::size_t i) const { return defect_.at(i); }
  std::span<const double> defects() const noexcept { return defect_; }

 private:
  BoxPtr box_;
  std::shared_ptr<const KernelTable> table_;
  std::vector<double> dense_;
  std::vector<double> defect_;
};

/// sigma(x) for a site of the box; DomainError when x is outside.
inline double boundary_defect(const BoxKernel& bk, std::span<const Coord> x) {
  if (x.size() != static_cast<std::size_t>(bk.box().dim())) throw ConfigError("boundary_defect: dimension mismatch");
  if (!bk.box().contains(x)) throw DomainError("boundary_defect: site outside box");
  return bk.defect(bk.box().index(x));
}

/// Builds the table sized for the box (cutoff = l1 diameter, at least 1).
inline BoxKernel make_box_kernel(BoxPtr box, const KernelSpec& spec, double target_eps = 1e-12,
                                 MassOptions opts = {}) {
  const auto cutoff = std::max<std::int64_t>(1, box->l1_diameter());
  auto table = std::make_shared<const KernelTable>(spec, cutoff, target_eps, opts);
  return BoxKernel(std::move(box), std::move(table));
}

}  // namespace fraclog
