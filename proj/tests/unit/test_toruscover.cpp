#include <gtest/gtest.h>

#include <random>

#include "meyer/errors.hpp"
#include "meyer/toruscover.hpp"
#include "support.hpp"

using namespace meyer;

namespace {

GridSet interval(std::size_t n, std::size_t lo, std::size_t hi) { return GridSet::box(1, n, {lo}, {hi}); }

GridSet random_grid(std::mt19937& rng, std::size_t dim, std::size_t n, double p) {
  GridSet g(dim, n);
  std::bernoulli_distribution coin(p);
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= n;
  for (std::size_t i = 0; i < total; ++i)
    if (coin(rng)) g.set_flat(i);
  return g;
}

// Pairwise cell sums modulo n in dimension one.
GridSet naive_torus_sum(const GridSet& a, const GridSet& b) {
  const std::size_t n = a.resolution();
  GridSet out(1, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a.test({i}) && b.test({j})) {
        out.set({(i + j) % n});
        out.set({(i + j + 1) % n});
      }
  return out;
}

}  // namespace

TEST(TorusSum, HalfPlusHalfIsFull) {
  const GridSet h = interval(1024, 0, 512);
  EXPECT_TRUE(torus_sum(h, h).is_full());
}

TEST(TorusSum, SingleCells) {
  const GridSet one = GridSet::box(2, 16, {3, 5}, {4, 6});
  EXPECT_LE(torus_sum(one, one).count(), 4u);
  EXPECT_EQ(torus_sum(interval(8, 2, 3), interval(8, 7, 8)).count(), 2u);
}

TEST(TorusSum, MatchesNaiveSum) {
  std::mt19937 rng(1);
  for (int t = 0; t < 50; ++t) {
    const GridSet a = random_grid(rng, 1, 64, 0.1), b = random_grid(rng, 1, 64, 0.2);
    ASSERT_EQ(torus_sum(a, b), naive_torus_sum(a, b));
  }
}

TEST(TorusSum, KempermanOnRandomSets) {
  std::mt19937 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t dim = 1 + t % 2;
    const std::size_t n = dim == 1 ? 256 : 32;
    const GridSet a = random_grid(rng, dim, n, 0.1), b = random_grid(rng, dim, n, 0.1);
    const Rational lhs = torus_sum(a, b).measure();
    ASSERT_GE(lhs, std::min(Rational(a.measure() + b.measure()), Rational(1)));
  }
}

TEST(TorusSum, ResolutionMismatch) {
  EXPECT_THROW(torus_sum(interval(8, 0, 1), interval(16, 0, 1)), InputError);
}

TEST(CellRuns, LineSumOfIntervals) {
  CellRuns a{{{0, 3}}}, b{{{10, 11}}};
  const CellRuns s = line_sum(a, b);
  ASSERT_EQ(s.runs.size(), 1u);
  EXPECT_EQ(s.runs[0], std::make_pair(10L, 15L));
  EXPECT_EQ(line_power(a, 3).runs[0], std::make_pair(0L, 11L));
}

TEST(CoverUnitCube, HalfInterval) {
  const GridSet a = interval(1024, 0, 512);
  const CoverCertificate c = cover_unit_cube(a, Rational(1, 2));
  EXPECT_EQ(c.k1, 2);
  EXPECT_EQ(c.m, 1);
  EXPECT_EQ(c.k2, 2);
  EXPECT_EQ(c.k, 8);
  EXPECT_TRUE(verify_cover_certificate(a, c));
  EXPECT_TRUE(verify_cover_bruteforce(a, c));
}

TEST(CoverUnitCube, FullCube) {
  for (std::size_t d = 1; d <= 2; ++d) {
    const GridSet a = GridSet::full(d, 32);
    const CoverCertificate c = cover_unit_cube(a, 1);
    EXPECT_EQ(c.k1, 1);
    EXPECT_LE(c.k, static_cast<long>(3 * d));
    EXPECT_TRUE(verify_cover_certificate(a, c));
    EXPECT_TRUE(verify_cover_bruteforce(a, c));
  }
}

TEST(CoverUnitCube, QuarterSquare) {
  const GridSet a = GridSet::box(2, 64, {0, 0}, {16, 16});
  const CoverCertificate c = cover_unit_cube(a, Rational(1, 16));
  EXPECT_EQ(c.k1, 4);
  EXPECT_EQ(c.k, 2 * c.k_prime);
  ASSERT_EQ(c.trace.size(), 2u);
  for (const auto& t : c.trace) EXPECT_EQ(t.line_measure, Rational(1, 4));
  EXPECT_TRUE(verify_cover_certificate(a, c));
  EXPECT_TRUE(verify_cover_bruteforce(GridSet::box(2, 16, {0, 0}, {4, 4}), cover_unit_cube(GridSet::box(2, 16, {0, 0}, {4, 4}), Rational(1, 16))));
}

TEST(CoverUnitCube, KWithinFormulaBound) {
  std::mt19937 rng(4);
  for (int t = 0; t < 40; ++t) {
    const GridSet a = random_grid(rng, 1, 256, 0.3);
    const Rational eps = Rational(1, 5);
    if (a.measure() < eps) continue;
    const CoverCertificate c = cover_unit_cube(a, eps);
    EXPECT_LE(c.k, 2 * 25 + 5);
    EXPECT_TRUE(verify_cover_certificate(a, c));
    EXPECT_TRUE(verify_cover_bruteforce(a, c));
  }
}

TEST(CoverUnitCube, Errors) {
  EXPECT_THROW(cover_unit_cube(interval(64, 0, 4), Rational(1, 2)), PreconditionError);
  EXPECT_THROW(cover_unit_cube(interval(64, 0, 32), 0), InputError);
}

TEST(CoverUnitCube, TamperedCertificateFails) {
  const GridSet a = interval(256, 0, 64);
  CoverCertificate c = cover_unit_cube(a, Rational(1, 4));
  ASSERT_TRUE(verify_cover_bruteforce(a, c));
  c.k = 1;
  EXPECT_FALSE(verify_cover_certificate(a, c));
  EXPECT_FALSE(verify_cover_bruteforce(a, c));
}

TEST(Parallelepiped, ImageIsCovered) {
  const GridSet a = GridSet::box(2, 32, {0, 0}, {16, 16});
  AffineMap m{{{2, 1}, {0, 1}}, {1, -1}};
  const ParallelepipedCertificate p = cover_parallelepiped(a, Rational(1, 4), m);
  EXPECT_TRUE(verify_cover_certificate(a, p.unit));
  // k T(A) + b = T(k A + b0) when b = M b0 + (1 - k) t.
  EXPECT_EQ(p.b, add(m.apply_linear(p.unit.b), scale(m.offset, Rational(1 - p.unit.k))));
}
