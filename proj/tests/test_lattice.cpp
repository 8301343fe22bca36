#include <cstdint>
#include <cstdlib>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "fraclog/lattice.hpp"

using namespace fraclog;

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Counts points with |z|_1 == n by scanning the cube [-n, n]^d.
std::uint64_t brute_sphere(int d, int n) {
  std::vector<int> z(static_cast<std::size_t>(d), -n);
  std::uint64_t count = 0;
  while (true) {
    int s = 0;
    for (int c : z) s += std::abs(c);
    if (s == n) ++count;
    int k = d - 1;
    for (; k >= 0; --k) {
      if (z[static_cast<std::size_t>(k)] < n) {
        ++z[static_cast<std::size_t>(k)];
        break;
      }
      z[static_cast<std::size_t>(k)] = -n;
    }
    if (k < 0) break;
  }
  return count;
}

}  // namespace

TEST(Lattice, L1DistanceExamples) {
  EXPECT_EQ(l1_distance(std::vector<Coord>{0}, std::vector<Coord>{0}), 0);
  EXPECT_EQ(l1_distance(std::vector<Coord>{1, 2}, std::vector<Coord>{4, 0}), 5);
  EXPECT_EQ(l1_distance(std::vector<Coord>{1, -1, 2}, std::vector<Coord>{0, 0, 0}), 4);
}

TEST(Lattice, L1DistanceDimensionMismatch) {
  EXPECT_THROW(l1_distance(std::vector<Coord>{1}, std::vector<Coord>{1, 2}), ConfigError);
}

TEST(Lattice, L1DistanceIsMetricOnSampledTriples) {
  const auto box = enumerate_box(2, 2);
  for (std::size_t a = 0; a < box->size(); ++a) {
    for (std::size_t b = 0; b < box->size(); ++b) {
      const auto dab = l1_distance(box->site(a), box->site(b));
      EXPECT_EQ(dab, l1_distance(box->site(b), box->site(a)));
      EXPECT_EQ(dab == 0, a == b);
      for (std::size_t c = 0; c < box->size(); c += 3) {
        EXPECT_LE(dab, l1_distance(box->site(a), box->site(c)) + l1_distance(box->site(c), box->site(b)));
      }
    }
  }
}

TEST(Lattice, EnumerateCounts) {
  EXPECT_EQ(enumerate_box(1, 1)->size(), 3u);
  EXPECT_EQ(enumerate_box(2, 1)->size(), 9u);
  EXPECT_EQ(enumerate_box(3, 2)->size(), 125u);
  const auto b = enumerate_box(1, 1);
  EXPECT_EQ(b->site(0)[0], -1);
  EXPECT_EQ(b->site(1)[0], 0);
  EXPECT_EQ(b->site(2)[0], 1);
}

TEST(Lattice, BijectionAndBounds) {
  for (int d = 1; d <= 3; ++d) {
    for (int R = 0; R <= 3; ++R) {
      const auto box = enumerate_box(d, R);
      ASSERT_EQ(box->size(), static_cast<std::size_t>(ipow(2 * R + 1, d)));
      std::set<std::vector<Coord>> seen;
      for (std::size_t i = 0; i < box->size(); ++i) {
        const auto x = box->site(i);
        EXPECT_EQ(box->index(x), i);
        for (Coord c : x) EXPECT_LE(std::abs(c), R);
        seen.insert(std::vector<Coord>(x.begin(), x.end()));
      }
      EXPECT_EQ(seen.size(), box->size());
    }
  }
}

TEST(Lattice, LexicographicOrder) {
  const auto box = enumerate_box(2, 1);
  for (std::size_t i = 1; i < box->size(); ++i) {
    const auto a = box->site(i - 1);
    const auto b = box->site(i);
    EXPECT_TRUE(std::vector<Coord>(a.begin(), a.end()) < std::vector<Coord>(b.begin(), b.end()));
  }
}

TEST(Lattice, IndexOutsideBoxThrows) {
  const auto box = enumerate_box(2, 1);
  EXPECT_FALSE(box->contains(std::vector<Coord>{2, 0}));
  EXPECT_THROW(box->index(std::vector<Coord>{2, 0}), DomainError);
}

TEST(Lattice, CenterAndDiameter) {
  const auto box = enumerate_box(2, 3);
  for (Coord c : box->site(box->center())) EXPECT_EQ(c, 0);
  EXPECT_EQ(box->l1_diameter(), 12);
}

TEST(Lattice, InvalidBoxes) {
  EXPECT_ANY_THROW(enumerate_box(0, 1));
  EXPECT_ANY_THROW(enumerate_box(1, -1));
  EXPECT_ANY_THROW(enumerate_box(8, 1000));
}

TEST(Lattice, SphereCountExamples) {
  EXPECT_EQ(l1_sphere_count(1, 5), 2u);
  EXPECT_EQ(l1_sphere_count(2, 3), 12u);
  EXPECT_EQ(l1_sphere_count(3, 1), 6u);
  EXPECT_THROW(l1_sphere_count(2, 0), DomainError);
}

TEST(Lattice, SphereCountMatchesBruteForce) {
  for (int d = 1; d <= 4; ++d) {
    for (int n = 1; n <= 20; ++n) {
      EXPECT_EQ(l1_sphere_count(d, n), brute_sphere(d, n)) << "d=" << d << " n=" << n;
    }
  }
}
