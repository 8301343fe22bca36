#pragma once

// Fractional Dirichlet form, operator application, the energy functional with
// its convex/C1 splitting, the gradient and the pointwise residual.
//
// All quadratic forms are evaluated exactly for zero-extended fields: in-box
// pairs plus u(x) v(x) sigma(x), where sigma is the boundary defect.

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "fraclog/errors.hpp"
#include "fraclog/field.hpp"
#include "fraclog/kernel.hpp"
#include "fraclog/potential.hpp"
#include "fraclog/summation.hpp"

namespace fraclog {

inline void require_box(const BoxKernel& bk, const Field& u) {
  if (!(bk.box() == u.box())) throw ConfigError("field box does not match kernel box");
}

/// (-Delta)^s u(x) = u(x) S - sum_{y in box, y != x} w(x - y) u(y).
inline Field apply_operator(const BoxKernel& bk, const Field& u) {
  require_box(bk, u);
  const std::size_t n = u.size();
  const double mass = bk.total_mass();
  Field out(u.box_ptr());
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum acc;
    acc += u[i] * mass;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && u[j] != 0.0) acc += -bk.pair_weight(i, j) * u[j];
    }
    out[i] = acc.value();
  }
  return out;
}

/// Integral of grad^s u grad^s v over the whole lattice.
inline double gradient_form(const BoxKernel& bk, const Field& u, const Field& v) {
  require_box(bk, u);
  require_box(bk, v);
  const std::size_t n = u.size();
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double du = u[i] - u[j];
      const double dv = v[i] - v[j];
      if (du != 0.0 && dv != 0.0) acc += bk.pair_weight(i, j) * du * dv;
    }
    if (u[i] != 0.0 && v[i] != 0.0) acc += u[i] * v[i] * bk.defect(i);
  }
  return acc.value();
}

/// K(u) = sum_x sum_{y != x} w(x,y) [u+(x) u-(y) + u-(x) u+(y)] <= 0.
inline double cross_term(const BoxKernel& bk, const Field& u) {
  require_box(bk, u);
  const std::size_t n = u.size();
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] <= 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (u[j] < 0.0) acc += 2.0 * bk.pair_weight(i, j) * u[i] * u[j];
    }
  }
  return acc.value();
}

// ---------------------------------------------------------------------------
// Splitting of -1/2 t^2 log t^2 into A (convex, nonnegative) and B (C1, power
// growth): B(t) = 1/2 t^2 log t^2 + A(t).

struct SplitParams {
  double delta = std::exp(-1.5);
  double p = 3.0;

  void validate() const {
    if (!(delta > 0.0 && delta <= std::exp(-1.5))) {
      throw ConfigError("split: delta must lie in (0, e^{-3/2}]", "split.delta");
    }
    if (!(p > 2.0) || !std::isfinite(p)) throw ConfigError("split: p must exceed 2", "split.p");
  }
};

/// t^2 log t^2 with the continuous extension 0 at t = 0.
inline double sq_log_sq(double t) noexcept {
  if (t == 0.0) return 0.0;
  const double t2 = t * t;
  return t2 * std::log(t2);
}

/// t log t^2, zero at t = 0.
inline double t_log_sq(double t) noexcept {
  if (t == 0.0) return 0.0;
  return t * std::log(t * t);
}

inline double a_func(double t, const SplitParams& sp) noexcept {
  const double at = std::fabs(t);
  if (at <= sp.delta) return -0.5 * sq_log_sq(t);
  const double d = sp.delta;
  return -0.5 * t * t * (std::log(d * d) + 3.0) + 2.0 * d * at - 0.5 * d * d;
}

inline double a_deriv(double t, const SplitParams& sp) noexcept {
  const double at = std::fabs(t);
  if (at <= sp.delta) return t == 0.0 ? 0.0 : -t_log_sq(t) - t;
  const double d = sp.delta;
  return -t * (std::log(d * d) + 3.0) + 2.0 * d * std::copysign(1.0, t);
}

inline double b_func(double t, const SplitParams& sp) noexcept {
  if (std::fabs(t) <= sp.delta) return 0.0;
  return 0.5 * sq_log_sq(t) + a_func(t, sp);
}

inline double b_deriv(double t, const SplitParams& sp) noexcept {
  if (std::fabs(t) <= sp.delta) return 0.0;
  return t_log_sq(t) + t + a_deriv(t, sp);
}

/// sup over a uniform grid on [-t_max, t_max] of |B'(t)| / |t|^{p-1}.
inline double b_growth_constant(const SplitParams& sp, double t_max = 10.0, int samples = 200001) {
  double c = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = -t_max + 2.0 * t_max * k / (samples - 1);
    if (t == 0.0) continue;
    c = std::max(c, std::fabs(b_deriv(t, sp)) / std::pow(std::fabs(t), sp.p - 1.0));
  }
  return c;
}

// ---------------------------------------------------------------------------

/// Box, kernel, sampled potential and splitting parameters of one problem.
class Problem {
 public:
  Problem(BoxKernel kernel, Potential h, SplitParams split = {})
      : kernel_(std::move(kernel)), potential_(std::move(h)), split_(split) {
    split_.validate();
    h_values_ = potential_.sample(kernel_.box());
  }

  const BoxKernel& kernel() const noexcept { return kernel_; }
  const Potential& potential() const noexcept { return potential_; }
  const SplitParams& split() const noexcept { return split_; }
  const LatticeBox& box() const noexcept { return kernel_.box(); }
  const BoxPtr& box_ptr() const noexcept { return kernel_.box_ptr(); }
  std::span<const double> h() const noexcept { return h_values_; }
  double h(std::size_t i) const noexcept { return h_values_[i]; }

 private:
  BoxKernel kernel_;
  Potential potential_;
  SplitParams split_;
  std::vector<double> h_values_;
};

struct EnergyReport {
  double J = 0.0;
  double J1 = 0.0;
  double J2 = 0.0;
  double seminorm_sq = 0.0;  ///< integral |grad^s u|^2
  double h_norm_sq = 0.0;    ///< seminorm + integral (h+1) u^2
  double l2_sq = 0.0;
  double log_term = 0.0;     ///< integral u^2 log u^2
  double K = 0.0;
};

namespace detail {

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("non-finite ") + what);
  return v;
}

}  // namespace detail

/// Weighted l2 term integral (h+1) u^2.
inline double potential_mass(const Problem& pb, const Field& u) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] != 0.0) acc += (pb.h(i) + 1.0) * u[i] * u[i];
  }
  return acc.value();
}

inline double log_term(const Field& u) {
  CompensatedSum acc;
  for (double v : u.values()) acc += sq_log_sq(v);
  return acc.value();
}

inline EnergyReport energy(const Problem& pb, const Field& u) {
  require_box(pb.kernel(), u);
  EnergyReport r;
  r.seminorm_sq = detail::checked(gradient_form(pb.kernel(), u, u), "seminorm");
  r.h_norm_sq = detail::checked(r.seminorm_sq + potential_mass(pb, u), "H_s norm");
  r.l2_sq = detail::checked(l2_squared(u), "l2 norm");
  r.log_term = detail::checked(log_term(u), "log term");
  CompensatedSum a_sum;
  CompensatedSum b_sum;
  for (double v : u.values()) {
    a_sum += a_func(v, pb.split());
    b_sum += b_func(v, pb.split());
  }
  r.J2 = detail::checked(a_sum.value(), "J2");
  r.J1 = detail::checked(0.5 * r.h_norm_sq - b_sum.value(), "J1");
  r.J = 0.5 * r.h_norm_sq - 0.5 * r.log_term;
  r.K = cross_term(pb.kernel(), u);
  return r;
}

/// g(x) = (-Delta)^s u(x) + h(x) u(x) - u(x) log u(x)^2; <g, phi> is the
/// derivative of the energy at u in direction phi.
inline Field grad_energy(const Problem& pb, const Field& u) {
  Field g = apply_operator(pb.kernel(), u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    g[i] += pb.h(i) * u[i] - t_log_sq(u[i]);
    detail::checked(g[i], "gradient");
  }
  return g;
}

struct Residual {
  double linf = 0.0;
  double l2 = 0.0;
};

/// Norms of the pointwise equation residual over the box.
inline Residual residual(const Problem& pb, const Field& u) {
  const Field g = grad_energy(pb, u);
  return {lp_norm(g, kInfNorm), lp_norm(g, 2.0)};
}

/// <J'(u), phi>.
inline double pairing(const Problem& pb, const Field& u, const Field& phi) { return dot(grad_energy(pb, u), phi); }

}  // namespace fraclog
