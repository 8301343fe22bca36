#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fraclog/nehari.hpp"
#include "fraclog/random.hpp"

using namespace fraclog;

namespace {

constexpr double kS = std::numbers::pi * std::numbers::pi / 3.0;

Problem problem(int d, int R, Potential h = Potential::constant(0.0)) {
  KernelSpec k;
  k.d = d;
  k.s = 0.5;
  return Problem(make_box_kernel(enumerate_box(d, R), k), std::move(h));
}

Field random_field(const BoxPtr& box, detail::UniformSource& rng) {
  Field u(box);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.next() < 0.25 ? 0.0 : rng.in(-2.0, 2.0);
  return u;
}

Field dipole(const Problem& pb) {
  Field u(pb.box_ptr());
  u[pb.box().index(std::vector<Coord>{1})] = 1.0;
  u[pb.box().index(std::vector<Coord>{-1})] = -1.0;
  return u;
}

// Golden-section maximization of t -> J(t u) via energy(), after a coarse
// grid on (0, 20].
double grid_argmax(const Problem& pb, const Field& u) {
  double best = 0.01;
  double bj = -1e300;
  for (int k = 1; k <= 2000; ++k) {
    const double t = 0.01 * k;
    const double j = energy(pb, t * u).J;
    if (j > bj) {
      bj = j;
      best = t;
    }
  }
  double a = best - 0.01;
  double b = best + 0.01;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (energy(pb, c * u).J > energy(pb, d * u).J) b = d; else a = c;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST(Nehari, FiberValueMatchesEnergy) {
  const auto pb = problem(1, 6);
  detail::UniformSource rng(3);
  for (int k = 0; k < 20; ++k) {
    const Field u = random_field(pb.box_ptr(), rng);
    if (u.is_zero()) continue;
    for (double t : {0.3, 1.0, 2.7}) {
      const double e = energy(pb, t * u).J;
      EXPECT_NEAR(fiber_value(pb, u, t), e, 1e-12 * std::max(1.0, std::fabs(e)));
    }
  }
  const Field d0 = point_mass(pb.box_ptr(), {0});
  EXPECT_NEAR(fiber_value(pb, d0, 2.0), 2.0 * (kS + 1) - 2 * std::log(4.0), 1e-10);
  EXPECT_LT(fiber_value(pb, d0, 1e3), -1e6);
  EXPECT_THROW(fiber_value(pb, d0, 0.0), DomainError);
  EXPECT_THROW(fiber_value(pb, Field(pb.box_ptr()), 1.0), DomainError);
}

TEST(Nehari, PointMassClosedForm) {
  const auto pb = problem(1, 10);
  const auto p = project_nehari(pb, point_mass(pb.box_ptr(), {0}));
  const double t = std::exp(std::numbers::pi * std::numbers::pi / 6.0);
  EXPECT_NEAR(p.result.t, t, 1e-10);
  EXPECT_NEAR(p.result.level, t * t / 2.0, 1e-9);
  EXPECT_NEAR(p.result.t, 5.180668317897, 1e-10);
  EXPECT_NEAR(p.result.level, 13.419662110031, 1e-9);
  EXPECT_NEAR(grid_argmax(pb, point_mass(pb.box_ptr(), {0})), t, 1e-7);
}

TEST(Nehari, ProjectionMatchesGridOracleAndScaling) {
  const auto pb = problem(1, 5, Potential::constant(0.3, -0.2));
  detail::UniformSource rng(17);
  for (int k = 0; k < 8; ++k) {
    Field u = random_field(pb.box_ptr(), rng);
    if (u.is_zero()) continue;
    u *= 0.2;
    const auto p = project_nehari(pb, u);
    if (p.result.t > 19.0) continue;
    EXPECT_NEAR(p.result.t, grid_argmax(pb, u), 1e-6 * p.result.t);
    EXPECT_NEAR(project_nehari(pb, p.field).result.t, 1.0, 1e-10);
    EXPECT_NEAR(project_nehari(pb, 3.0 * u).result.t, p.result.t / 3.0, 1e-10 * p.result.t);
    EXPECT_NEAR(p.result.level, 0.5 * l2_squared(p.field), 1e-10 * p.result.level);
    EXPECT_NEAR(pairing(pb, p.field, p.field), 0.0, 1e-9 * p.result.level);
  }
  EXPECT_THROW(project_nehari(pb, Field(pb.box_ptr())), DomainError);
}

TEST(Nehari, FgMapsAgreeWithPairings) {
  const auto pb = problem(1, 5);
  detail::UniformSource rng(23);
  for (int k = 0; k < 20; ++k) {
    const Field u = random_field(pb.box_ptr(), rng);
    const auto parts = split_signs(u);
    if (parts.plus.is_zero() || parts.minus.is_zero()) continue;
    const double a = rng.in(0.1, 4);
    const double b = rng.in(0.1, 4);
    const Field v = a * parts.plus + b * parts.minus;
    const auto fg = fg_maps(pb, u, a, b);
    const double f = pairing(pb, v, a * parts.plus);
    const double g = pairing(pb, v, b * parts.minus);
    EXPECT_NEAR(fg.f, f, 1e-10 * (1 + std::fabs(f) + energy(pb, v).h_norm_sq));
    EXPECT_NEAR(fg.g, g, 1e-10 * (1 + std::fabs(g) + energy(pb, v).h_norm_sq));
  }
  EXPECT_THROW(fg_maps(pb, point_mass(pb.box_ptr(), {0}), 1, 1), DomainError);
}

TEST(Nehari, DipoleSymmetryReduction) {
  const auto pb = problem(1, 10);
  const Field u = dipole(pb);
  for (double a : {0.5, 1.0, 3.0, 7.0}) {
    const auto fg = fg_maps(pb, u, a, a);
    const double expect = a * a * (kS + 0.25 - std::log(a * a));
    EXPECT_NEAR(fg.f, expect, 1e-10 * (1 + std::fabs(expect)));
    EXPECT_NEAR(fg.g, expect, 1e-10 * (1 + std::fabs(expect)));
  }
}

TEST(Nehari, FOverAlphaSquaredDecreasing) {
  const auto pb = problem(1, 5);
  detail::UniformSource rng(31);
  Field u = random_field(pb.box_ptr(), rng);
  u[0] = 1.0;
  u[1] = -1.0;
  for (double b : {0.2, 1.0, 5.0}) {
    double prev = 1e300;
    for (int k = 1; k <= 200; ++k) {
      const double a = 0.05 * k;
      const double v = fg_maps(pb, u, a, b).f / (a * a);
      EXPECT_LT(v, prev);
      prev = v;
    }
  }
}

TEST(Nehari, DipoleSignProjection) {
  const auto pb = problem(1, 10);
  const auto p = project_sign_changing(pb, dipole(pb));
  const double alpha = std::exp((kS + 0.25) / 2.0);
  EXPECT_NEAR(p.result.alpha, alpha, 1e-9);
  EXPECT_NEAR(p.result.beta, alpha, 1e-9);
  EXPECT_NEAR(p.result.alpha, 5.870466290277, 1e-9);
  EXPECT_NEAR(p.result.level, alpha * alpha, 1e-8);
  EXPECT_LE(std::fabs(p.result.residual_f), 1e-10);
  EXPECT_LE(std::fabs(p.result.residual_g), 1e-10);
  EXPECT_TRUE(p.result.converged);
  EXPECT_FALSE(p.result.ill_conditioned);
}

TEST(Nehari, SignProjectionFixedPointUniquenessAndL5) {
  const auto pb = problem(1, 6, Potential::coercive({0}, 0.5));
  detail::UniformSource rng(41);
  int done = 0;
  while (done < 10) {
    const Field u = random_field(pb.box_ptr(), rng);
    const auto parts = split_signs(u);
    if (parts.plus.is_zero() || parts.minus.is_zero()) continue;
    ++done;
    const auto p = project_sign_changing(pb, u);
    const auto q = project_sign_changing(pb, p.field);
    EXPECT_NEAR(q.result.alpha, 1.0, 1e-10);
    EXPECT_NEAR(q.result.beta, 1.0, 1e-10);
    const auto s = sign_scalars(pb, u);
    for (int k0 : {3, 9}) {
      SignProjectionOptions o;
      o.first_bracket_exponent = k0;
      const auto ab = solve_alpha_beta(s, o);
      EXPECT_NEAR(ab.alpha, p.result.alpha, 1e-12 * p.result.alpha);
      EXPECT_NEAR(ab.beta, p.result.beta, 1e-12 * p.result.beta);
    }
    const Field big = 1.5 * p.field;
    const auto bp = split_signs(big);
    EXPECT_LE(pairing(pb, big, bp.plus), 0.0);
    EXPECT_LE(pairing(pb, big, bp.minus), 0.0);
    const auto r = project_sign_changing(pb, big);
    EXPECT_GT(r.result.alpha, 0.0);
    EXPECT_LE(r.result.alpha, 1.0);
    EXPECT_LE(r.result.beta, 1.0);
  }
}

TEST(Nehari, SignProjectionErrors) {
  const auto pb = problem(1, 4);
  EXPECT_THROW(project_sign_changing(pb, point_mass(pb.box_ptr(), {0})), DomainError);
  SignProjectionOptions o;
  o.max_bracket_exponent = 1;
  Field u = dipole(pb);
  u *= 1e-3;
  EXPECT_THROW(project_sign_changing(pb, u, o), NumericalError);
}

TEST(Nehari, StrictInequalityOnGrid) {
  const auto pb = problem(1, 4);
  const auto m = project_sign_changing(pb, dipole(pb)).field;
  const auto parts = split_signs(m);
  const double jm = energy(pb, m).J;
  for (int i = 0; i < 15; ++i) {
    for (int j = 0; j < 15; ++j) {
      if (i == 7 && j == 7) continue;
      const double a = std::pow(4.0, i / 7.0 - 1.0);
      const double b = std::pow(4.0, j / 7.0 - 1.0);
      EXPECT_LT(energy(pb, a * parts.plus + b * parts.minus).J, jm);
    }
  }
  for (int k = 1; k <= 10000; ++k) {
    const double x = 3.0 * (k - 0.5) / 10000;
    EXPECT_GT((1 - x * x) + x * x * std::log(x * x), 0.0);
  }
}
