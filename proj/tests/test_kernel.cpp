#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fraclog/kernel.hpp"

using namespace fraclog;

namespace {

KernelSpec spec(int d, double s) {
  KernelSpec k;
  k.d = d;
  k.s = s;
  return k;
}

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

}  // namespace

TEST(Kernel, WeightExamples) {
  EXPECT_DOUBLE_EQ(weight(spec(1, 0.5), std::vector<Coord>{2}), 0.25);
  EXPECT_DOUBLE_EQ(weight(spec(2, 0.5), std::vector<Coord>{1, 1}), 0.125);
  EXPECT_NEAR(weight(spec(1, 0.25), std::vector<Coord>{3}), std::pow(3.0, -1.5), 1e-15);
  EXPECT_NEAR(weight(spec(1, 0.25), std::vector<Coord>{3}), 0.19245, 1e-5);
}

TEST(Kernel, WeightErrors) {
  EXPECT_THROW(weight(spec(1, 0.5), std::vector<Coord>{0}), DomainError);
  EXPECT_THROW(weight(spec(1, 0.5), std::vector<Coord>{1, 0}), ConfigError);
  EXPECT_THROW(weight(spec(1, 1.0), std::vector<Coord>{1}), ConfigError);
  EXPECT_THROW(weight(spec(1, 0.0), std::vector<Coord>{1}), ConfigError);
}

TEST(Kernel, SymmetricPositiveTwoSided) {
  const auto k = spec(2, 0.3);
  for (int a = -4; a <= 4; ++a) {
    for (int b = -4; b <= 4; ++b) {
      if (a == 0 && b == 0) continue;
      const std::vector<Coord> z{a, b};
      const std::vector<Coord> mz{-a, -b};
      const double w = weight(k, z);
      EXPECT_GT(w, 0.0);
      EXPECT_EQ(w, weight(k, mz));
      const double p = std::pow(std::abs(a) + std::abs(b), -k.exponent());
      EXPECT_GE(w, k.c_low * p * (1 - 1e-15));
      EXPECT_LE(w, k.c_high * p * (1 + 1e-15));
    }
  }
}

TEST(Kernel, MassClosedFormsAgainstZeta) {
  // Oracle: libstdc++ riemann_zeta, independent of the shell code.
  for (int d : {1, 2}) {
    for (double s : {0.25, 0.5, 0.75}) {
      const auto m = total_mass(spec(d, s), 1e-9);
      const double z = (d == 1 ? 2.0 : 4.0) * std::riemann_zeta(1.0 + 2.0 * s);
      EXPECT_NEAR(m.value, z, 1e-8) << "d=" << d << " s=" << s;
      EXPECT_LE(std::fabs(m.value - z), m.error_bound + 1e-12);
    }
  }
  EXPECT_NEAR(total_mass(spec(1, 0.5), 1e-12).value, kPi2 / 3.0, 1e-11);
  EXPECT_NEAR(total_mass(spec(2, 0.5), 1e-10).value, 2.0 * kPi2 / 3.0, 1e-9);
}

TEST(Kernel, MassS09) {
  const auto m = total_mass(spec(1, 0.9), 1e-10);
  EXPECT_NEAR(m.value, 2.0 * std::riemann_zeta(2.8), 1e-9);
  EXPECT_NEAR(m.value, 2.4940628446345, 1e-9);
}

TEST(Kernel, PartialSumsMonotoneAndBounded) {
  const auto k = spec(1, 0.25);
  const auto m = total_mass(k, 1e-9);
  double prev = 0.0;
  for (std::int64_t r = 1; r <= 4096; r *= 2) {
    const double p = shell_partial_sum(k, r);
    EXPECT_GT(p, prev);
    EXPECT_LE(p, m.value + m.error_bound);
    prev = p;
  }
}

TEST(Kernel, UnreachableTargetThrows) {
  MassOptions o;
  o.max_radius = 8;
  EXPECT_THROW(total_mass(spec(1, 0.1), 1e-15, o), ToleranceError);
}

TEST(Kernel, TableTailMassMonotone) {
  const KernelTable t(spec(1, 0.5), 50);
  double prev = t.tail_mass(0);
  EXPECT_NEAR(prev, t.total_mass(), 1e-15);
  for (std::int64_t r = 1; r <= 50; ++r) {
    const double cur = t.tail_mass(r);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
  EXPECT_THROW(t.at_radius(51), ConfigError);
  EXPECT_THROW(t.at_radius(0), DomainError);
}

TEST(Kernel, TableCsv) {
  const KernelTable t(spec(2, 0.5), 1);
  std::ostringstream os;
  t.write_csv(os);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("z1,z2,weight\n", 0), 0u);
  int lines = 0;
  for (char c : s) lines += c == '\n';
  EXPECT_EQ(lines, 1 + 4);
}

TEST(Kernel, BoundaryDefectExamples) {
  const auto bk = make_box_kernel(enumerate_box(1, 1), spec(1, 0.5));
  const double S = kPi2 / 3.0;
  EXPECT_NEAR(boundary_defect(bk, std::vector<Coord>{1}), S - 1.0 - 0.25, 1e-10);
  EXPECT_NEAR(boundary_defect(bk, std::vector<Coord>{0}), S - 2.0, 1e-10);
  EXPECT_NEAR(boundary_defect(bk, std::vector<Coord>{-1}), S - 1.25, 1e-10);
  EXPECT_THROW(boundary_defect(bk, std::vector<Coord>{2}), DomainError);
}

TEST(Kernel, BoundaryDefectDecreasesWithRadius) {
  double prev = 1e300;
  for (int R : {1, 2, 4, 8, 16, 32}) {
    const auto bk = make_box_kernel(enumerate_box(1, R), spec(1, 0.5));
    const double s = boundary_defect(bk, std::vector<Coord>{0});
    EXPECT_LT(s, prev);
    // Oracle: 2 sum_{n > R} n^-2 by direct summation plus the integral tail.
    double tail = 0.0;
    for (int n = 200000; n > R; --n) tail += 2.0 / (static_cast<double>(n) * n);
    tail += 2.0 / 200000.5;
    EXPECT_NEAR(s, tail, 1e-9);
    prev = s;
  }
}

TEST(Kernel, BoxKernelNeedsCutoff) {
  auto table = std::make_shared<const KernelTable>(spec(1, 0.5), 3);
  EXPECT_THROW(BoxKernel(enumerate_box(1, 2), table), ConfigError);
  EXPECT_NO_THROW(BoxKernel(enumerate_box(1, 1), table));
}
