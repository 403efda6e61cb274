#include <gtest/gtest.h>

#include <random>

#include "meyer/errors.hpp"
#include "meyer/freiman.hpp"
#include "support.hpp"

using namespace meyer;
using namespace meyer::testing;

namespace {

// Direct check of both containments, independent of verify_cover.
bool oracle(const FiniteSet& a, const CoverResult& r) {
  const FiniteSet q = enumerate(r.q);
  const FiniteSet big = iterated(a, 2, 2).set;
  if (!q.is_subset_of(big)) return false;
  for (const auto& x : a) {
    bool hit = false;
    for (const auto& f : r.f)
      if (q.contains(sub(x, f))) hit = true;
    if (!hit) return false;
  }
  return is_proper(r.q) && r.q.symmetric();
}

std::vector<long> range(long lo, long hi) {
  std::vector<long> out;
  for (long i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

}  // namespace

TEST(FindCover, Interval) {
  const FiniteSet a = ints(range(0, 9));
  const CoverResult r = find_cover(a);
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.q.rank(), 1u);
  EXPECT_EQ(r.q.steps()[0], v1(1));
  EXPECT_EQ(r.f.size(), 1u);
  EXPECT_TRUE(r.cert_q_in_2a2a && r.cert_a_in_fq);
  EXPECT_TRUE(oracle(a, r));
  EXPECT_TRUE(verify_cover(a, r));
  EXPECT_EQ(r.doubling, Rational(19, 10));
}

TEST(FindCover, TwoBlocksWithSingleTranslate) {
  const FiniteSet a = ints({0, 1, 10, 11, 20, 21});
  CoverOptions opts;
  opts.max_f = 1;
  const CoverResult r = find_cover(a, opts);
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.q.rank(), 2u);
  EXPECT_EQ(as_longs(enumerate(Gap(r.q.steps(), {1, 1}, v1(0), false))), (std::vector<long>{0, 1, 10, 11}));
  EXPECT_EQ(r.f.size(), 1u);
  EXPECT_TRUE(oracle(a, r));
  EXPECT_TRUE(verify_cover(a, r));
}

TEST(FindCover, TwoBlocksDefaultBudgetPrefersLowRank) {
  const FiniteSet a = ints({0, 1, 10, 11, 20, 21});
  const CoverResult r = find_cover(a);
  ASSERT_TRUE(r.success);
  EXPECT_LE(r.f.size(), 16u);
  EXPECT_TRUE(oracle(a, r));
}

TEST(FindCover, Singleton) {
  const CoverResult r = find_cover(ints({0}));
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.q.rank(), 0u);
  EXPECT_EQ(as_longs(r.f), std::vector<long>{0});
  EXPECT_THROW(find_cover(FiniteSet(1)), PreconditionError);
}

TEST(FindCover, RationalInputIsDilatedBack) {
  const FiniteSet a(1, {v1(0), v1(Rational(1, 3)), v1(Rational(2, 3)), v1(1)});
  const CoverResult r = find_cover(a);
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.dilation, 3);
  EXPECT_TRUE(oracle(a, r));
}

TEST(FindCover, DoublingMatchesDirectCount) {
  const FiniteSet a = ints({0, 2, 3, 7, 11});
  EXPECT_EQ(find_cover(a).doubling, Rational(difference(a, a).size(), a.size()));
}

TEST(FindCover, ProperSymmetricGapsAreCovered) {
  std::mt19937 rng(21);
  std::uniform_int_distribution<long> step(1, 40), len(0, 4);
  for (int t = 0; t < 200; ++t) {
    Gap g({v1(step(rng)), v1(step(rng))}, {len(rng), len(rng)}, v1(0), true);
    if (!is_proper(g)) continue;
    const FiniteSet a = enumerate(g);
    CoverOptions opts;
    opts.max_rank = 2;
    opts.max_f = 9;
    const CoverResult r = find_cover(a, opts);
    ASSERT_TRUE(r.success) << to_string(g.steps()[0]) << " " << to_string(g.steps()[1]);
    EXPECT_LE(r.f.size(), 9u);
    EXPECT_TRUE(oracle(a, r));
  }
}

TEST(VerifyCover, Perturbations) {
  const FiniteSet a = ints(range(0, 9));
  const CoverResult r = find_cover(a);
  ASSERT_TRUE(verify_cover(a, r));
  CoverResult no_f = r;
  no_f.f = FiniteSet(1);
  EXPECT_FALSE(verify_cover(a, no_f));
  CoverResult bent = r;
  bent.q = Gap({v1(2)}, r.q.lengths(), v1(0), true);
  EXPECT_FALSE(verify_cover(a, bent));
  EXPECT_FALSE(oracle(a, bent));
}

TEST(FindCover, RandomSuccessesAlwaysVerify) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<long> val(-50, 50);
  for (int t = 0; t < 30; ++t) {
    std::vector<long> xs(6);
    for (auto& x : xs) x = val(rng);
    const FiniteSet a = ints(xs);
    CoverOptions opts;
    opts.budget = 200000;
    const CoverResult r = find_cover(a, opts);
    if (r.success) EXPECT_TRUE(oracle(a, r));
  }
}

TEST(Symmetrize, Squares) {
  EXPECT_EQ(asymmetric_to_symmetric(2), 4);
  EXPECT_EQ(asymmetric_to_symmetric(1), 1);
  EXPECT_EQ(asymmetric_to_symmetric(Rational(3, 2)), Rational(9, 4));
  EXPECT_THROW(asymmetric_to_symmetric(Rational(1, 2)), InputError);
}
