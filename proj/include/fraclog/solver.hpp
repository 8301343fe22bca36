#pragma once

// Ground states (minimizers over the Nehari manifold) and sign-changing ground
// states (minimizers over the sign-changing Nehari manifold) by projected,
// diagonally preconditioned energy descent with restarts. Global optimality is
// not certified: a result is accepted on stationarity, best level over restarts.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fraclog/energy.hpp"
#include "fraclog/random.hpp"
#include "fraclog/nehari.hpp"

namespace fraclog {

enum class SolveMode { ground, sign_changing };
enum class InitKind { random, single_site, dipole, file };

inline const char* to_string(SolveMode m) { return m == SolveMode::ground ? "ground" : "sign_changing"; }

inline const char* to_string(InitKind k) {
  switch (k) {
    case InitKind::random: return "random";
    case InitKind::single_site: return "single_site";
    case InitKind::dipole: return "dipole";
    case InitKind::file: return "file";
  }
  return "?";
}

struct SolveConfig {
  SolveMode mode = SolveMode::ground;
  double step = 1.0;
  int max_iters = 20000;
  double residual_tol = 1e-8;
  int restarts = 1;
  std::uint64_t rng_seed = 1;
  /// Empty selects random (ground) or dipole (sign-changing).
  std::optional<InitKind> init;
  std::optional<Field> init_field;
  /// l-infinity radius of the randomly initialized central patch.
  int patch_radius = 2;
  double noise = 0.05;
  int max_halvings = 30;
  /// Relative slack on the level test, at the rounding floor of J.
  double level_slack = 64.0 * std::numeric_limits<double>::epsilon();
  double collapse_ratio = 1e-12;
  /// Below this residual a Newton step on the full equation is tried before
  /// the gradient step (boxes up to newton_max_sites only).
  double newton_switch = 1e-2;
  std::size_t newton_max_sites = 4096;
  SignProjectionOptions projection{};

  void validate() const {
    if (!(step > 0.0)) throw ConfigError("solver: step must be positive", "solver.step");
    if (!(residual_tol > 0.0)) throw ConfigError("solver: tol must be positive", "solver.tol");
    if (restarts < 1) throw ConfigError("solver: restarts must be >= 1", "solver.restarts");
    if (max_iters < 0) throw ConfigError("solver: max_iters must be >= 0", "solver.max_iters");
    if (patch_radius < 0) throw ConfigError("solver: patch radius must be >= 0", "solver.patch");
    if (init == InitKind::file && !init_field) throw ConfigError("solver: init=file needs a field", "solver.init_file");
  }
};

struct TracePoint {
  double level;
  double residual;
};

struct SolveResult {
  Field field;
  double level = 0.0;
  double residual_linf = 0.0;
  double residual_l2 = 0.0;
  double pairing_plus = 0.0;   ///< <J'(u), u+> (or <J'(u), u> in ground mode)
  double pairing_minus = 0.0;  ///< <J'(u), u->
  double half_l2_sq = 0.0;     ///< 1/2 ||u||_2^2, equal to the level on the manifold
  double cross_term = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  int collapses = 0;
  std::uint64_t seed_used = 0;
  bool converged = false;
  bool sign_definite = false;
  std::vector<TracePoint> history;
};

namespace detail {

inline Field initial_field(const Problem& pb, const SolveConfig& cfg, std::uint64_t seed) {
  const auto& box = pb.box();
  const InitKind kind = cfg.init.value_or(cfg.mode == SolveMode::ground ? InitKind::random : InitKind::dipole);
  UniformSource rng(seed);
  Field u(pb.box_ptr());
  std::vector<Coord> x(static_cast<std::size_t>(box.dim()), 0);
  switch (kind) {
    case InitKind::file:
      u = *cfg.init_field;
      u.require_same_box(Field(pb.box_ptr()));
      break;
    case InitKind::single_site:
      u[box.center()] = 1.0;
      break;
    case InitKind::random: {
      const int r = std::min(cfg.patch_radius, box.radius());
      for (std::size_t i = 0; i < box.size(); ++i) {
        const auto site = box.site(i);
        bool inside = true;
        for (Coord c : site) inside = inside && std::abs(c) <= r;
        if (inside) u[i] = rng.in(0.5, 1.5);
      }
      break;
    }
    case InitKind::dipole: {
      if (box.radius() < 1) throw DomainError("dipole initialization needs a box radius >= 1");
      x[0] = 1;
      u[box.index(x)] = 1.0 + rng.in(-cfg.noise, cfg.noise);
      x[0] = -1;
      u[box.index(x)] = -(1.0 + rng.in(-cfg.noise, cfg.noise));
      break;
    }
  }
  return u;
}

// Diagonal of the energy Hessian, S + h - log u^2 - 2, kept >= 1. Zero sites
// use the floor u^2 >= 1e-300.
inline Field preconditioner(const Problem& pb, const Field& u) {
  Field p(u.box_ptr());
  const double mass = pb.kernel().total_mass();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double u2 = std::max(u[i] * u[i], 1e-300);
    p[i] = std::max(1.0, mass + pb.h(i) - std::log(u2) - 2.0);
  }
  return p;
}

// Newton direction for the pointwise equation: (L + diag(h - log u^2 - 2)) d = -g.
inline std::optional<Field> newton_direction(const Problem& pb, const Field& u, const Field& g) {
  const auto& bk = pb.kernel();
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd hess(n, n);
  Eigen::VectorXd rhs(n);
  const double mass = bk.total_mass();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      hess(i, j) = i == j ? 0.0 : -bk.pair_weight(ii, static_cast<std::size_t>(j));
    }
    const double u2 = std::max(u[ii] * u[ii], 1e-300);
    hess(i, i) = mass + pb.h(ii) - std::log(u2) - 2.0;
    rhs(i) = -g[ii];
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(hess);
  const Eigen::VectorXd step = lu.solve(rhs);
  if (!step.allFinite()) return std::nullopt;
  Field d(u.box_ptr());
  for (Eigen::Index i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = step(i);
  return d;
}

inline bool collapsed(const Field& v, double ratio) {
  const auto parts = split_signs(v);
  const double total = std::sqrt(l2_squared(v));
  return std::sqrt(l2_squared(parts.plus)) < ratio * total || std::sqrt(l2_squared(parts.minus)) < ratio * total;
}

struct Attempt {
  Field field;
  double level = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  bool collapsed = false;
  std::vector<TracePoint> history;
};

inline std::optional<Projection> project(const Problem& pb, const Field& v, const SolveConfig& cfg) {
  if (cfg.mode == SolveMode::ground) {
    if (v.is_zero()) return std::nullopt;
    return project_nehari(pb, v);
  }
  if (collapsed(v, cfg.collapse_ratio)) return std::nullopt;
  try {
    return project_sign_changing(pb, v, cfg.projection);
  } catch (const DomainError&) {
    return std::nullopt;
  } catch (const NumericalError&) {
    return std::nullopt;
  }
}

inline Attempt descend(const Problem& pb, const SolveConfig& cfg, std::uint64_t seed) {
  Attempt at{Field(pb.box_ptr())};
  auto proj = project(pb, initial_field(pb, cfg, seed), cfg);
  if (!proj) {
    at.collapsed = true;
    return at;
  }
  Field u = std::move(proj->field);
  double level = proj->result.level;
  Field g = grad_energy(pb, u);
  double res = lp_norm(g, kInfNorm);
  at.history.push_back({level, res});
  int it = 0;
  for (; it < cfg.max_iters && res > cfg.residual_tol; ++it) {
    if (res < cfg.newton_switch && u.size() <= cfg.newton_max_sites) {
      if (auto dir = newton_direction(pb, u, g)) {
        auto next = project(pb, u + *dir, cfg);
        if (next && next->result.level <= level + cfg.level_slack * std::fabs(level)) {
          Field gn = grad_energy(pb, next->field);
          const double rn = lp_norm(gn, kInfNorm);
          if (rn < res) {
            u = std::move(next->field);
            level = next->result.level;
            g = std::move(gn);
            res = rn;
            at.history.push_back({level, res});
            continue;
          }
        }
      }
    }
    const Field p = preconditioner(pb, u);
    double gamma = cfg.step;
    bool accepted = false;
    for (int halving = 0; halving <= cfg.max_halvings; ++halving, gamma *= 0.5) {
      Field v = u;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= gamma * g[i] / p[i];
      auto next = project(pb, v, cfg);
      if (!next) continue;
      if (next->result.level <= level + cfg.level_slack * std::fabs(level)) {
        u = std::move(next->field);
        level = next->result.level;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    g = grad_energy(pb, u);
    res = lp_norm(g, kInfNorm);
    at.history.push_back({level, res});
  }
  at.iterations = it;
  at.level = level;
  at.residual = res;
  at.converged = res <= cfg.residual_tol;
  at.field = std::move(u);
  return at;
}

inline SolveResult finalize(const Problem& pb, const SolveConfig& cfg, Attempt&& at) {
  SolveResult r{std::move(at.field)};
  const Field g = grad_energy(pb, r.field);
  r.residual_linf = lp_norm(g, kInfNorm);
  r.residual_l2 = lp_norm(g, 2.0);
  r.level = energy(pb, r.field).J;
  r.half_l2_sq = 0.5 * l2_squared(r.field);
  r.cross_term = cross_term(pb.kernel(), r.field);
  const auto parts = split_signs(r.field);
  r.sign_definite = parts.plus.is_zero() || parts.minus.is_zero();
  if (cfg.mode == SolveMode::ground) {
    r.pairing_plus = dot(g, r.field);
    r.pairing_minus = 0.0;
  } else {
    r.pairing_plus = dot(g, parts.plus);
    r.pairing_minus = dot(g, parts.minus);
  }
  r.iterations = at.iterations;
  r.converged = at.converged;
  r.history = std::move(at.history);
  return r;
}

inline std::uint64_t restart_seed(std::uint64_t base, int k) {
  return base + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k);
}

inline SolveResult solve(const Problem& pb, const SolveConfig& cfg) {
  cfg.validate();
  std::optional<Attempt> best;
  std::uint64_t best_seed = 0;
  int collapses = 0;
  for (int k = 0; k < cfg.restarts; ++k) {
    const std::uint64_t seed = restart_seed(cfg.rng_seed, k);
    Attempt at = descend(pb, cfg, seed);
    if (at.collapsed) {
      ++collapses;
      continue;
    }
    // Converged attempts beat unconverged ones; then lowest level; ties keep
    // the earlier restart.
    const bool better = !best || (at.converged && !best->converged) ||
                        (at.converged == best->converged && at.level < best->level);
    if (better) {
      best = std::move(at);
      best_seed = seed;
    }
  }
  if (!best) {
    throw NumericalError("solver: every restart collapsed to a single-signed field");
  }
  SolveResult r = finalize(pb, cfg, std::move(*best));
  r.restarts_used = cfg.restarts;
  r.collapses = collapses;
  r.seed_used = best_seed;
  return r;
}

}  // namespace detail

/// Minimizes the energy over the Nehari manifold.
inline SolveResult solve_ground(const Problem& pb, SolveConfig cfg) {
  cfg.mode = SolveMode::ground;
  return detail::solve(pb, cfg);
}

/// Minimizes the energy over the sign-changing Nehari manifold.
inline SolveResult solve_sign_changing(const Problem& pb, SolveConfig cfg) {
  cfg.mode = SolveMode::sign_changing;
  return detail::solve(pb, cfg);
}

inline SolveResult solve(const Problem& pb, const SolveConfig& cfg) {
  return cfg.mode == SolveMode::ground ? solve_ground(pb, cfg) : solve_sign_changing(pb, cfg);
}

}  // namespace fraclog
