#pragma once

// Verification suite: decomposition identities, projections, the A/B split,
// norm inequalities, kernel mass against zeta, and the appendix series.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <numbers>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fraclog/energy.hpp"
#include "fraclog/errors.hpp"
#include "fraclog/field.hpp"
#include "fraclog/kernel.hpp"
#include "fraclog/lattice.hpp"
#include "fraclog/nehari.hpp"
#include "fraclog/potential.hpp"
#include "fraclog/random.hpp"
#include "fraclog/summation.hpp"

namespace fraclog {

struct CheckRecord {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
};

class VerifyReport {
 public:
  /// Pass iff |measured - target| <= tolerance.
  void close(const std::string& name, double measured, double target, double tol) {
    add({name, std::fabs(measured - target) <= tol, measured, target, tol});
  }
  /// Pass iff measured <= bound.
  void at_most(const std::string& name, double measured, double bound) {
    add({name, measured <= bound, measured, bound, 0.0});
  }
  /// Pass iff measured > bound.
  void above(const std::string& name, double measured, double bound) {
    add({name, measured > bound, measured, bound, 0.0});
  }

  void add(CheckRecord r) {
    if (!std::isfinite(r.measured)) r.pass = false;
    if (!names_.insert(r.name).second) throw Error("verify: duplicate check name " + r.name);
    records_.push_back(std::move(r));
  }

  void merge(const VerifyReport& o) {
    for (const auto& r : o.records_) add(r);
  }

  const std::vector<CheckRecord>& records() const noexcept { return records_; }
  bool all_pass() const {
    return std::all_of(records_.begin(), records_.end(), [](const CheckRecord& r) { return r.pass; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(), [](const CheckRecord& r) { return !r.pass; }));
  }
  const CheckRecord* find(const std::string& name) const {
    for (const auto& r : records_) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  /// One line per record: "PASS name measured=.. target=.. tol=..".
  void write(std::ostream& os) const {
    char buf[320];
    for (const auto& r : records_) {
      std::snprintf(buf, sizeof buf, "%s %s measured=%.10g target=%.10g tol=%.3g\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.measured, r.target, r.tolerance);
      os << buf;
    }
  }

 private:
  std::vector<CheckRecord> records_;
  std::set<std::string> names_;
};

// ---------------------------------------------------------------------------
// Oracles.

/// Riemann zeta for x > 1 via the alternating eta series with the
/// Cohen-Rodriguez Villegas-Zagier acceleration (n = 40 terms).
inline double zeta_oracle(double x) {
  if (!(x > 1.0)) throw DomainError("zeta_oracle: argument must exceed 1");
  const int n = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += c / std::pow(k + 1.0, x);
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  const double eta = sum / d;
  return eta / (1.0 - std::pow(2.0, 1.0 - x));
}

/// |a - b| relative to `scale` (at least max(|a|, |b|)).
inline double rel_diff(double a, double b, double scale = 0.0) {
  const double den = std::max({std::fabs(a), std::fabs(b), std::fabs(scale), 1e-300});
  return std::fabs(a - b) / den;
}

namespace detail {

// Uniform in [-2, 2] with a quarter of the sites exactly zero.
inline Field random_field(const BoxPtr& box, UniformSource& rng) {
  Field u(box);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double z = rng.next();
    const double v = rng.in(-2.0, 2.0);
    u[i] = z < 0.25 ? 0.0 : v;
  }
  return u;
}

inline bool sign_changing(const Field& u) {
  bool pos = false;
  bool neg = false;
  for (double v : u.values()) {
    pos = pos || v > 0.0;
    neg = neg || v < 0.0;
  }
  return pos && neg;
}

inline Field random_sign_changing(const BoxPtr& box, UniformSource& rng) {
  for (;;) {
    Field u = random_field(box, rng);
    if (sign_changing(u)) return u;
  }
}

// Values of magnitude in [0.5, 2] with random sign on a random support.
inline Field random_nonvanishing(const BoxPtr& box, UniformSource& rng) {
  Field u(box);
  bool any = false;
  while (!any) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const bool on = rng.next() < 0.75;
      const double mag = rng.in(0.5, 2.0);
      u[i] = on ? (rng.next() < 0.5 ? -mag : mag) : 0.0;
      any = any || on;
    }
  }
  return u;
}

// alpha in (0, 5].
inline double random_scale(UniformSource& rng) { return 5.0 * (1.0 - rng.next()); }

inline double weighted_sq(const Problem& pb, const Field& v) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < v.size(); ++i) acc += pb.h(i) * v[i] * v[i];
  return acc.value();
}

// Scale t maximizing t -> J(t u): log grid on [e^-12, e^12], then bisection
// on the sign of d/dt J(t u) = <J'(t u), u>. Uses only energy and gradient.
inline double fiber_argmax_oracle(const Problem& pb, const Field& u) {
  const int n = 2401;
  double best_t = 0.0;
  double best_j = -std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = 0; k < n; ++k) {
    const double t = std::exp(-12.0 + 24.0 * k / (n - 1));
    const double j = energy(pb, t * u).J;
    if (j > best_j) {
      best_j = j;
      best_t = t;
      best_k = k;
    }
  }
  double lo = std::exp(-12.0 + 24.0 * std::max(0, best_k - 1) / (n - 1));
  double hi = std::exp(-12.0 + 24.0 * std::min(n - 1, best_k + 1) / (n - 1));
  (void)best_t;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (pairing(pb, mid * u, u) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline Problem default_problem(int d, int radius, double s = 0.5) {
  KernelSpec spec;
  spec.d = d;
  spec.s = s;
  return Problem(make_box_kernel(enumerate_box(d, radius), spec), Potential::constant(0.0));
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Proposition (i)-(iii) and Corollary (i)-(iii): max relative defect over
/// `trials` random sign-changing fields and random (alpha, beta) in (0, 5]^2.
inline VerifyReport decomposition_checks(const Problem& pb, std::uint64_t seed, int trials, double tol = 1e-10) {
  detail::UniformSource rng(seed);
  const auto& bk = pb.kernel();
  double e[6] = {0, 0, 0, 0, 0, 0};
  double k_max = -std::numeric_limits<double>::infinity();
  double k_single = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Field u = detail::random_sign_changing(pb.box_ptr(), rng);
    const double a = detail::random_scale(rng);
    const double b = detail::random_scale(rng);
    const auto parts = split_signs(u);
    const Field up = a * parts.plus;
    const Field um = b * parts.minus;
    const Field v = up + um;
    const double K = cross_term(bk, u);
    k_max = std::max(k_max, K);
    Field au = u;
    for (double& x : au.values()) x = std::fabs(x);
    k_single = std::max(k_single, std::fabs(cross_term(bk, au)));

    const double gp = gradient_form(bk, up, up);
    const double gm = gradient_form(bk, um, um);
    const double ab = a * b * K;
    e[0] = std::max(e[0], rel_diff(gradient_form(bk, v, v), gp + gm - ab, gp + gm + std::fabs(ab)));
    e[1] = std::max(e[1], rel_diff(gradient_form(bk, v, up), gp - 0.5 * ab, gp + std::fabs(ab)));
    e[2] = std::max(e[2], rel_diff(gradient_form(bk, v, um), gm - 0.5 * ab, gm + std::fabs(ab)));

    const double jp = energy(pb, up).J;
    const double jm = energy(pb, um).J;
    const auto rv = energy(pb, v);
    const double jscale = std::fabs(jp) + std::fabs(jm) + std::fabs(ab) + rv.h_norm_sq + std::fabs(rv.log_term);
    e[3] = std::max(e[3], rel_diff(rv.J, jp + jm - 0.5 * ab, jscale));
    const double pp = pairing(pb, up, up);
    const double pm = pairing(pb, um, um);
    e[4] = std::max(e[4], rel_diff(pairing(pb, v, up), pp - 0.5 * ab, jscale));
    e[5] = std::max(e[5], rel_diff(pairing(pb, v, um), pm - 0.5 * ab, jscale));
  }
  VerifyReport r;
  r.close("proposition_i_seminorm", e[0], 0.0, tol);
  r.close("proposition_ii_mixed_plus", e[1], 0.0, tol);
  r.close("proposition_iii_mixed_minus", e[2], 0.0, tol);
  r.close("corollary_i_energy", e[3], 0.0, tol);
  r.close("corollary_ii_pairing_plus", e[4], 0.0, tol);
  r.close("corollary_iii_pairing_minus", e[5], 0.0, tol);
  r.add({"cross_term_negative", k_max < 0.0, k_max, 0.0, 0.0});
  r.close("cross_term_single_sign_zero", k_single, 0.0, 0.0);
  return r;
}

/// Closed-form t_u against the grid + refinement oracle, the fixed point and
/// scaling law of the projection, and the reduced level J = 1/2 |u|_2^2 on N.
inline VerifyReport fibering_checks(const Problem& pb, std::uint64_t seed, int fields, double tol = 1e-8) {
  detail::UniformSource rng(seed);
  double t_err = 0.0;
  double fixed = 0.0;
  double scaling = 0.0;
  double level = 0.0;
  double residual = 0.0;
  for (int k = 0; k < fields; ++k) {
    Field u = detail::random_field(pb.box_ptr(), rng);
    if (u.is_zero()) u[0] = 1.0;
    const auto proj = project_nehari(pb, u);
    const double oracle = detail::fiber_argmax_oracle(pb, u);
    t_err = std::max(t_err, rel_diff(proj.result.t, oracle));
    fixed = std::max(fixed, std::fabs(project_nehari(pb, proj.field).result.t - 1.0));
    const double a = 0.5 + 2.5 * rng.next();
    scaling = std::max(scaling, rel_diff(project_nehari(pb, a * u).result.t, proj.result.t / a));
    level = std::max(level, rel_diff(proj.result.level, 0.5 * l2_squared(proj.field)));
    residual = std::max(residual, std::fabs(proj.result.residual_f) / energy(pb, proj.field).h_norm_sq);
  }
  VerifyReport r;
  r.close("fiber_closed_form_vs_oracle", t_err, 0.0, tol);
  r.close("nehari_fixed_point", fixed, 0.0, 1e-10);
  r.close("nehari_scaling_law", scaling, 0.0, 1e-10);
  r.close("nehari_reduced_level", level, 0.0, 1e-10);
  r.close("nehari_pairing_residual", residual, 0.0, 1e-10);
  return r;
}

/// Sign-changing projection: residuals, reduced level, multi-start uniqueness,
/// the strict inequality on a 15 x 15 grid and the (0, 1] lemma.
inline VerifyReport sign_projection_checks(const Problem& pb, std::uint64_t seed, int members) {
  detail::UniformSource rng(seed);
  double residual = 0.0;
  double level = 0.0;
  double spread = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  double max_l5 = 0.0;
  bool l5_pairings = true;
  std::vector<double> grid(15);
  for (int k = 0; k < 15; ++k) grid[static_cast<std::size_t>(k)] = std::pow(4.0, (2.0 * k) / 14.0 - 1.0);
  grid[7] = 1.0;
  for (int m = 0; m < members; ++m) {
    const Field u = detail::random_sign_changing(pb.box_ptr(), rng);
    const auto proj = project_sign_changing(pb, u);
    const auto rep = energy(pb, proj.field);
    residual = std::max(residual, (std::fabs(proj.result.residual_f) + std::fabs(proj.result.residual_g)) / rep.h_norm_sq);
    level = std::max(level, rel_diff(rep.J, 0.5 * rep.l2_sq));

    const SignScalars sc = sign_scalars(pb, u);
    double a0 = 0.0;
    double b0 = 0.0;
    for (int k0 : {1, 4, 8}) {
      SignProjectionOptions opt;
      opt.first_bracket_exponent = k0;
      const AlphaBeta ab = solve_alpha_beta(sc, opt);
      if (k0 == 1) {
        a0 = ab.alpha;
        b0 = ab.beta;
      }
      spread = std::max({spread, rel_diff(ab.alpha, a0), rel_diff(ab.beta, b0)});
    }

    const Field& w = proj.field;
    const auto parts = split_signs(w);
    for (double a : grid) {
      for (double b : grid) {
        if (a == 1.0 && b == 1.0) continue;
        min_margin = std::min(min_margin, rep.J - energy(pb, a * parts.plus + b * parts.minus).J);
      }
    }

    const Field big = 1.5 * w;
    const auto bp = split_signs(big);
    l5_pairings = l5_pairings && pairing(pb, big, bp.plus) <= 0.0 && pairing(pb, big, bp.minus) <= 0.0;
    const auto p5 = project_sign_changing(pb, big);
    if (!(p5.result.alpha > 0.0 && p5.result.beta > 0.0)) l5_pairings = false;
    max_l5 = std::max({max_l5, p5.result.alpha, p5.result.beta});
  }
  VerifyReport r;
  r.close("sign_projection_residual", residual, 0.0, 1e-12);
  r.close("sign_projection_reduced_level", level, 0.0, 1e-10);
  r.close("sign_projection_uniqueness", spread, 0.0, 1e-12);
  r.above("strict_inequality_grid_margin", min_margin, 0.0);
  r.add({"lemma_l5_pairings_nonpositive", l5_pairings, l5_pairings ? 1.0 : 0.0, 1.0, 0.0});
  r.at_most("lemma_l5_scales_in_unit_interval", max_l5, 1.0);
  return r;
}

/// (1 - x^2) + x^2 log x^2 > 0 on 10^4 grid points of (0, 3] avoiding 1.
inline VerifyReport scalar_inequality_check(int points = 10000) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= points; ++k) {
    const double x = 3.0 * (k - 0.5) / points;
    if (x == 1.0) continue;
    worst = std::min(worst, (1.0 - x * x) + sq_log_sq(x));
  }
  VerifyReport r;
  r.above("strict_inequality_scalar", worst, 0.0);
  return r;
}

/// Corollary (i) on the dipole +1 at e1, -1 at -e1 with (alpha, beta) = (2, 3).
inline VerifyReport dipole_corollary_check(const Problem& pb) {
  std::vector<Coord> x(static_cast<std::size_t>(pb.box().dim()), 0);
  Field u(pb.box_ptr());
  x[0] = 1;
  u[pb.box().index(x)] = 1.0;
  x[0] = -1;
  u[pb.box().index(x)] = -1.0;
  const auto parts = split_signs(u);
  const double K = cross_term(pb.kernel(), u);
  const double lhs = energy(pb, 2.0 * parts.plus + 3.0 * parts.minus).J;
  const double rhs = energy(pb, 2.0 * parts.plus).J + energy(pb, 3.0 * parts.minus).J - 3.0 * K;
  VerifyReport r;
  r.close("dipole_corollary_2_3", rel_diff(lhs, rhs), 0.0, 1e-10);
  return r;
}

/// Norm equivalence, interpolation, norm ordering, the J = J1 + J2 split,
/// convexity of J2, A/B properties and the finite-difference gradient check.
inline VerifyReport functional_checks(const Problem& pb, std::uint64_t seed, int trials) {
  detail::UniformSource rng(seed);
  const double mass = pb.kernel().total_mass();
  double lower = std::numeric_limits<double>::infinity();
  double upper = 0.0;
  double interp = -std::numeric_limits<double>::infinity();
  double order = -std::numeric_limits<double>::infinity();
  double split = 0.0;
  double j2_min = std::numeric_limits<double>::infinity();
  double convex = -std::numeric_limits<double>::infinity();
  double grad = 0.0;
  for (int t = 0; t < trials; ++t) {
    Field u = detail::random_field(pb.box_ptr(), rng);
    if (u.is_zero()) u[0] = 1.0;
    const double l2 = l2_squared(u);
    const double sn = gradient_form(pb.kernel(), u, u) + l2;
    lower = std::min(lower, sn / l2);
    upper = std::max(upper, sn / l2);
    const double inf = lp_norm(u, kInfNorm);
    const double l2n = std::sqrt(l2);
    for (double q : {3.0, 4.0, 6.0}) {
      const double lq = lp_norm(u, q);
      interp = std::max(interp, std::pow(lq, q) / (l2 * std::pow(inf, q - 2.0)) - 1.0);
      order = std::max(order, lq / l2n - 1.0);
    }
    const auto rep = energy(pb, u);
    split = std::max(split, rel_diff(rep.J, rep.J1 + rep.J2, rep.h_norm_sq + std::fabs(rep.log_term)));
    j2_min = std::min(j2_min, rep.J2);
    const Field v = detail::random_field(pb.box_ptr(), rng);
    const double jv = energy(pb, v).J2;
    for (double lam : {0.25, 0.5, 0.75}) {
      const double mid = energy(pb, lam * u + (1.0 - lam) * v).J2;
      const double chord = lam * rep.J2 + (1.0 - lam) * jv;
      convex = std::max(convex, (mid - chord) / std::max(1.0, chord));
    }

    const Field w = detail::random_nonvanishing(pb.box_ptr(), rng);
    Field phi(pb.box_ptr());
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] != 0.0) phi[i] = rng.in(-1.0, 1.0);
    }
    const double eps = 1e-4;
    const double fd = (energy(pb, w + eps * phi).J - energy(pb, w - eps * phi).J) / (2.0 * eps);
    const Field g = grad_energy(pb, w);
    CompensatedSum scale;
    for (std::size_t i = 0; i < g.size(); ++i) scale += std::fabs(g[i] * phi[i]);
    grad = std::max(grad, std::fabs(fd - dot(g, phi)) / std::max(scale.value(), 1e-300));
  }
  VerifyReport r;
  r.at_most("norm_equivalence_lower", 1.0 - lower, 1e-12);
  r.at_most("norm_equivalence_upper", upper, 1.0 + 3.0 * mass);
  r.at_most("interpolation_q_3_4_6", interp, 1e-12);
  r.at_most("norm_ordering_q_3_4_6", order, 1e-12);
  r.close("energy_split_J1_plus_J2", split, 0.0, 1e-10);
  r.at_most("energy_J2_nonnegative", -j2_min, 0.0);
  r.at_most("energy_J2_convex", convex, 1e-12);
  r.close("gradient_central_difference", grad, 0.0, 1e-6);
  return r;
}

/// Pointwise properties of the split functions on a dense grid.
inline VerifyReport split_checks(const SplitParams& sp) {
  double even = 0.0;
  double neg = 0.0;
  double monotone = 0.0;
  double bound = 0.0;
  const int n = 20001;
  for (int k = 0; k < n; ++k) {
    const double t = -10.0 + 20.0 * k / (n - 1);
    const double a = a_func(t, sp);
    const double at = a_deriv(t, sp) * t;
    const double scale = std::max(1.0, std::fabs(a));
    even = std::max(even, std::fabs(a - a_func(-t, sp)) / scale);
    neg = std::max(neg, -a / scale);
    monotone = std::max(monotone, -at / scale);
    bound = std::max(bound, (a - at) / scale);
  }
  // Outer-branch formulas evaluated at |t| = delta.
  const double d = sp.delta;
  const double outer = -0.5 * d * d * (std::log(d * d) + 3.0) + 2.0 * d * d - 0.5 * d * d;
  const double outer_d = -d * (std::log(d * d) + 3.0) + 2.0 * d;
  const double c1 = std::max(std::fabs(outer - a_func(d, sp)), std::fabs(outer_d - a_deriv(d, sp)));
  const double growth = b_growth_constant(sp);
  double b_inner = 0.0;
  for (int k = 0; k <= 100; ++k) b_inner = std::max(b_inner, std::fabs(b_func(d * k / 100.0, sp)));
  VerifyReport r;
  r.close("A_even", even, 0.0, 1e-15);
  r.at_most("A_nonnegative", neg, 1e-15);
  r.at_most("A_prime_t_nonnegative", monotone, 1e-15);
  r.at_most("A_below_A_prime_t", bound, 1e-12);
  r.close("A_C1_at_delta", c1, 0.0, 1e-12);
  r.close("B_zero_inside_delta", b_inner, 0.0, 0.0);
  r.add({"B_growth_constant_finite", std::isfinite(growth) && growth > 0.0, growth, 0.0, 0.0});
  return r;
}

/// Kernel mass against 2 zeta(1 + 2s) (d = 1) and 4 zeta(1 + 2s) (d = 2), and
/// the seminorm bound |grad^s u|^2 <= 3 S |u|_2^2 on random fields.
inline VerifyReport kernel_crosscheck(std::uint64_t seed = 1, int trials = 100) {
  VerifyReport r;
  char name[64];
  for (int d : {1, 2}) {
    for (double s : {0.25, 0.5, 0.75}) {
      KernelSpec spec;
      spec.d = d;
      spec.s = s;
      const double tol = (d == 1 && s == 0.5) ? 1e-8 : 1e-6;
      const auto m = total_mass(spec, 0.1 * tol);
      const double oracle = (d == 1 ? 2.0 : 4.0) * zeta_oracle(1.0 + 2.0 * s);
      std::snprintf(name, sizeof name, "kernel_mass_d%d_s%.2f", d, s);
      r.close(name, m.value, oracle, tol);
    }
  }
  const Problem pb = detail::default_problem(1, 8);
  const double mass = pb.kernel().total_mass();
  detail::UniformSource rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Field u = detail::random_field(pb.box_ptr(), rng);
    if (u.is_zero()) u[0] = 1.0;
    worst = std::max(worst, gradient_form(pb.kernel(), u, u) / l2_squared(u));
  }
  r.at_most("kernel_seminorm_bound_3S", worst, 3.0 * mass + 1e-9);
  const auto sigma1 = boundary_defect(detail::default_problem(1, 1).kernel(), std::vector<Coord>{1});
  r.close("boundary_defect_d1_R1_edge", sigma1, std::numbers::pi * std::numbers::pi / 3.0 - 1.25, 1e-8);
  return r;
}

/// Everything except the appendix series, on d = 1, R = 8, s = 0.5, h = 0.
inline VerifyReport run_identity_suite(std::uint64_t seed, int trials) {
  if (trials < 1) throw ConfigError("verify: trials must be >= 1", "trials");
  const Problem pb = detail::default_problem(1, 8);
  VerifyReport r;
  r.merge(decomposition_checks(pb, seed, trials));
  r.merge(fibering_checks(pb, seed + 1, trials));
  r.merge(sign_projection_checks(pb, seed + 2, std::min(trials, 10)));
  r.merge(scalar_inequality_check());
  r.merge(dipole_corollary_check(pb));
  r.merge(functional_checks(pb, seed + 3, trials));
  r.merge(split_checks(pb.split()));
  r.merge(kernel_crosscheck(seed + 4, trials));
  return r;
}

// ---------------------------------------------------------------------------
// Appendix: u = (n^{1/2} log n)^{-1} on the ray x = n e, n >= 3.

struct SeriesCheckpoint {
  std::int64_t n = 0;
  double s1 = 0.0;    ///< sum 1/(n log^2 n)
  double s2 = 0.0;    ///< sum 1/(n log n)
  double s15 = 0.0;   ///< sum 1/(n log^{1.5} n)
  double logt = 0.0;  ///< sum u^2 |log u^2|
};

/// Partial sums from n = 3 up to each checkpoint (sorted, <= 10^8 terms).
inline std::vector<SeriesCheckpoint> appendix_partial_sums(std::vector<std::int64_t> checkpoints) {
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.empty() || checkpoints.front() < 3) throw DomainError("appendix: checkpoints must be >= 3");
  if (checkpoints.back() > 100000000) throw CapacityError("appendix: more than 10^8 terms requested");
  std::vector<SeriesCheckpoint> out;
  CompensatedSum s1;
  CompensatedSum s2;
  CompensatedSum s15;
  CompensatedSum lt;
  std::size_t next = 0;
  for (std::int64_t n = 3; next < checkpoints.size(); ++n) {
    const double x = static_cast<double>(n);
    const double l = std::log(x);
    const double a = 1.0 / (x * l);
    s2 += a;
    s1 += a / l;
    s15 += a / std::sqrt(l);
    const double u2 = a / l;
    lt += -u2 * std::log(u2);
    if (n == checkpoints[next]) {
      out.push_back({n, s1.value(), s2.value(), s15.value(), lt.value()});
      ++next;
    }
  }
  return out;
}

/// Divergence of sum 1/(n log n) as the gap S2(N^2) - S2(N) ~ log 2 with
/// N^2 <= cap, Cauchy gaps of sum 1/(n log^2 n), and the p = 1.5 / p = 1
/// dichotomy.
inline VerifyReport appendix_divergence(std::int64_t cap = 100000000) {
  if (cap < 10000) throw ConfigError("appendix: cap must be >= 10^4", "cap");
  if (cap > 100000000) throw CapacityError("appendix: cap exceeds the 10^8 term budget");
  const auto big = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(cap)) + 1e-9));
  std::vector<std::int64_t> pts = {10, 100, 1000, big, big * big};
  for (std::int64_t n : {10LL, 100LL, 1000LL}) pts.push_back(std::min<std::int64_t>(n * n, cap));
  const std::int64_t n6 = 1000000;
  const std::int64_t n7 = 10000000;
  for (std::int64_t p : {n6, n7}) {
    if (p <= cap) pts.push_back(p);
  }
  const auto sums = appendix_partial_sums(pts);
  const auto at = [&](std::int64_t n) -> const SeriesCheckpoint& {
    for (const auto& c : sums) {
      if (c.n == n) return c;
    }
    throw Error("appendix: missing checkpoint");
  };
  VerifyReport r;
  char name[80];
  const auto& lo = at(big);
  const auto& hi = at(big * big);
  std::snprintf(name, sizeof name, "appendix_S2_gap_%lld_%lld", static_cast<long long>(big),
                static_cast<long long>(big * big));
  r.close(name, hi.s2 - lo.s2, std::numbers::ln2, 1e-3);
  for (std::int64_t n : {10LL, 100LL, 1000LL}) {
    const std::int64_t m = std::min<std::int64_t>(n * n, cap);
    std::snprintf(name, sizeof name, "appendix_S1_cauchy_%lld", static_cast<long long>(n));
    r.at_most(name, at(m).s1 - at(n).s1, 1.0 / std::log(static_cast<double>(n)));
  }
  if (cap >= n7) {
    const bool mono = at(n6).s1 < at(n7).s1;
    r.add({"appendix_S1_monotone_1e6_1e7", mono, at(n7).s1 - at(n6).s1, 0.0, 0.0});
    r.at_most("appendix_S1_bounded_1e7", at(n7).s1, 1.2);
  }
  std::snprintf(name, sizeof name, "appendix_p1.5_cauchy_%lld", static_cast<long long>(big));
  r.at_most(name, hi.s15 - lo.s15, 2.0 / std::sqrt(std::log(static_cast<double>(big))));
  std::snprintf(name, sizeof name, "appendix_p1_gap_persists_%lld", static_cast<long long>(big));
  r.above(name, hi.s2 - lo.s2, 0.5 * std::numbers::ln2);
  // The log term sum grows at least like the S2 gap on the same window.
  std::snprintf(name, sizeof name, "appendix_log_term_growth_%lld", static_cast<long long>(big));
  r.above(name, hi.logt - lo.logt, 0.5 * std::numbers::ln2);
  std::snprintf(name, sizeof name, "appendix_l2_bounded_%lld", static_cast<long long>(big * big));
  r.at_most(name, hi.s1, 1.0 / std::log(2.0));
  return r;
}

}  // namespace fraclog
