#pragma once

// Projections onto the Nehari manifold (one scale t_u) and onto the
// sign-changing Nehari manifold (two scales alpha, beta on u+ and u-).

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "fraclog/energy.hpp"
#include "fraclog/errors.hpp"
#include "fraclog/field.hpp"

namespace fraclog {

enum class ProjectionKind { nehari, sign_changing };

inline const char* to_string(ProjectionKind k) { return k == ProjectionKind::nehari ? "nehari" : "sign_changing"; }

struct ProjectionResult {
  ProjectionKind kind = ProjectionKind::nehari;
  double t = 0.0;      ///< nehari scale
  double alpha = 0.0;  ///< sign-changing scale on u+
  double beta = 0.0;   ///< sign-changing scale on u-
  double level = 0.0;  ///< J at the projected field
  double residual_f = 0.0;
  double residual_g = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  bool converged = true;
  bool ill_conditioned = false;
};

struct Projection {
  ProjectionResult result;
  Field field;
};

/// Quantities of u that fix the fibering map t -> J(t u).
struct FiberData {
  double h_norm_sq = 0.0;
  double log_term = 0.0;
  double l2_sq = 0.0;
};

inline FiberData fiber_data(const Problem& pb, const Field& u) {
  FiberData fd;
  fd.h_norm_sq = gradient_form(pb.kernel(), u, u) + potential_mass(pb, u);
  fd.log_term = log_term(u);
  fd.l2_sq = l2_squared(u);
  return fd;
}

/// J(t u) = t^2/2 [ ||u||_H^2 - int u^2 log u^2 - log t^2 int u^2 ].
inline double fiber_value(const FiberData& fd, double t) {
  if (!(t > 0.0)) throw DomainError("fiber_value: t must be positive");
  return 0.5 * t * t * (fd.h_norm_sq - fd.log_term - std::log(t * t) * fd.l2_sq);
}

inline double fiber_value(const Problem& pb, const Field& u, double t) {
  if (u.is_zero()) throw DomainError("fiber_value: u must be nonzero");
  return fiber_value(fiber_data(pb, u), t);
}

/// Unique maximizer of the fibering map:
/// log t_u^2 = (||u||_H^2 - int u^2 log u^2 - ||u||_2^2) / ||u||_2^2.
inline double nehari_scale(const FiberData& fd) {
  if (!(fd.l2_sq > 0.0)) throw DomainError("nehari projection of the zero field");
  const double expo = (fd.h_norm_sq - fd.log_term - fd.l2_sq) / (2.0 * fd.l2_sq);
  const double t = std::exp(expo);
  if (!std::isfinite(t) || t == 0.0) throw NumericalError("nehari projection: scale over/underflows");
  return t;
}

inline Projection project_nehari(const Problem& pb, const Field& u) {
  if (u.is_zero()) throw DomainError("nehari projection of the zero field");
  const double t = nehari_scale(fiber_data(pb, u));
  Field v = t * u;
  ProjectionResult r;
  r.kind = ProjectionKind::nehari;
  r.t = t;
  r.level = energy(pb, v).J;
  r.residual_f = pairing(pb, v, v);
  r.residual_g = 0.0;
  r.bracket_low = r.bracket_high = t;
  return {r, std::move(v)};
}

// ---------------------------------------------------------------------------
// Sign-changing projection.

/// Scalars of u+ and u- that determine f and g for every (alpha, beta):
///   f = alpha^2 (P+ - L+ - log alpha^2 l+) - alpha beta K / 2
///   g = beta^2  (P- - L- - log beta^2  l-) - alpha beta K / 2
/// with P = int |grad^s u^pm|^2 + h (u^pm)^2, L = int (u^pm)^2 log (u^pm)^2,
/// l = int (u^pm)^2.
struct SignScalars {
  double p_plus = 0.0, log_plus = 0.0, l2_plus = 0.0;
  double p_minus = 0.0, log_minus = 0.0, l2_minus = 0.0;
  double K = 0.0;
};

inline SignScalars sign_scalars(const Problem& pb, const Field& u) {
  const auto parts = split_signs(u);
  if (parts.plus.is_zero() || parts.minus.is_zero()) {
    throw DomainError("sign-changing projection needs u+ != 0 and u- != 0");
  }
  const auto& bk = pb.kernel();
  SignScalars s;
  const auto weighted = [&](const Field& v) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0.0) acc += pb.h(i) * v[i] * v[i];
    }
    return acc.value();
  };
  s.p_plus = gradient_form(bk, parts.plus, parts.plus) + weighted(parts.plus);
  s.p_minus = gradient_form(bk, parts.minus, parts.minus) + weighted(parts.minus);
  s.log_plus = log_term(parts.plus);
  s.log_minus = log_term(parts.minus);
  s.l2_plus = l2_squared(parts.plus);
  s.l2_minus = l2_squared(parts.minus);
  s.K = cross_term(bk, u);
  return s;
}

struct FG {
  double f = 0.0;
  double g = 0.0;
};

inline FG fg_values(const SignScalars& s, double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("fg_maps: alpha and beta must be positive");
  const double cross = -0.5 * alpha * beta * s.K;
  return {alpha * alpha * (s.p_plus - s.log_plus - std::log(alpha * alpha) * s.l2_plus) + cross,
          beta * beta * (s.p_minus - s.log_minus - std::log(beta * beta) * s.l2_minus) + cross};
}

/// f = <J'(alpha u+ + beta u-), alpha u+>, g = <J'(alpha u+ + beta u-), beta u->.
inline FG fg_maps(const Problem& pb, const Field& u, double alpha, double beta) {
  return fg_values(sign_scalars(pb, u), alpha, beta);
}

struct SignProjectionOptions {
  /// Acceptance threshold on |f| + |g| relative to ||alpha u+ + beta u-||_H^2.
  double tol = 1e-12;
  /// Brackets are [2^-k, 2^k] for k = first_bracket_exponent, ...
  int first_bracket_exponent = 1;
  int max_bracket_exponent = 64;
  /// log2 bracket width at and above which the result is flagged ill-conditioned.
  double ill_conditioned_width = 40.0;
};

struct AlphaBeta {
  double alpha = 1.0;
  double beta = 1.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
};

namespace detail {

// f / alpha^2 and g / beta^2 in log coordinates a = log alpha, b = log beta;
// same signs as f and g, no overflow for wide brackets.
inline double f_scaled(const SignScalars& s, double a, double b) {
  return s.p_plus - s.log_plus - 2.0 * a * s.l2_plus - 0.5 * std::exp(b - a) * s.K;
}
inline double g_scaled(const SignScalars& s, double a, double b) {
  return s.p_minus - s.log_minus - 2.0 * b * s.l2_minus - 0.5 * std::exp(a - b) * s.K;
}

// Bisection for the sign change of a function positive at lo and negative at hi.
template <class F>
double bisect_decreasing(F&& fn, double lo, double hi) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (fn(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Root (alpha, beta) of f = g = 0 by nested bisection: for fixed beta, f/alpha^2
/// is strictly decreasing in alpha, giving alpha(beta); then bisect
/// g(alpha(beta), beta) in beta. The bracket [r, R] = [2^-k, 2^k] is grown
/// until f, g > 0 at (r, r) and f, g < 0 at (R, R).
inline AlphaBeta solve_alpha_beta(const SignScalars& s, const SignProjectionOptions& opt = {}) {
  if (!(s.l2_plus > 0.0 && s.l2_minus > 0.0)) throw DomainError("sign-changing projection needs u+ != 0 and u- != 0");
  int k = std::max(1, opt.first_bracket_exponent);
  double lo = 0.0;
  double hi = 0.0;
  for (;; ++k) {
    if (k > opt.max_bracket_exponent) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "sign-changing projection: no bracket within [2^-%d, 2^%d] "
                    "(|u+|^2=%.3g, |u-|^2=%.3g, K=%.3g)",
                    opt.max_bracket_exponent, opt.max_bracket_exponent, s.l2_plus, s.l2_minus, s.K);
      throw NumericalError(buf);
    }
    lo = -k * std::log(2.0);
    hi = k * std::log(2.0);
    if (detail::f_scaled(s, lo, lo) > 0.0 && detail::g_scaled(s, lo, lo) > 0.0 &&
        detail::f_scaled(s, hi, hi) < 0.0 && detail::g_scaled(s, hi, hi) < 0.0) {
      break;
    }
  }
  const auto alpha_of = [&](double b) {
    return detail::bisect_decreasing([&](double a) { return detail::f_scaled(s, a, b); }, lo, hi);
  };
  const double b = detail::bisect_decreasing([&](double bb) { return detail::g_scaled(s, alpha_of(bb), bb); }, lo, hi);
  const double a = alpha_of(b);
  return {std::exp(a), std::exp(b), std::exp(lo), std::exp(hi)};
}

inline Field combine_signs(const Field& u, double alpha, double beta) {
  Field v(u.box_ptr());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] > 0.0 ? alpha * u[i] : beta * u[i];
  return v;
}

inline Projection project_sign_changing(const Problem& pb, const Field& u, const SignProjectionOptions& opt = {}) {
  const SignScalars s = sign_scalars(pb, u);
  const AlphaBeta ab = solve_alpha_beta(s, opt);
  Field v = combine_signs(u, ab.alpha, ab.beta);
  ProjectionResult r;
  r.kind = ProjectionKind::sign_changing;
  r.alpha = ab.alpha;
  r.beta = ab.beta;
  const FG fg = fg_values(s, ab.alpha, ab.beta);
  r.residual_f = fg.f;
  r.residual_g = fg.g;
  r.bracket_low = ab.bracket_low;
  r.bracket_high = ab.bracket_high;
  const auto rep = energy(pb, v);
  r.level = rep.J;
  r.converged = std::fabs(fg.f) + std::fabs(fg.g) <= opt.tol * std::max(rep.h_norm_sq, 1e-300);
  r.ill_conditioned = std::log2(ab.bracket_high / ab.bracket_low) >= opt.ill_conditioned_width;
  return {r, std::move(v)};
}

}  // namespace fraclog
