#include <gtest/gtest.h>

#include <map>
#include <set>

#include "meyer/errors.hpp"
#include "meyer/modelsets.hpp"
#include "support.hpp"

using namespace meyer;
using namespace meyer::testing;

namespace {

// sign(a + b*sqrt5) with integer a, b, using only integer arithmetic.
int sign_sqrt5(long a, long b) {
  const int sa = (a > 0) - (a < 0), sb = (b > 0) - (b < 0);
  if (sa == sb || sb == 0) return sa;
  if (sa == 0) return sb;
  const long lhs = a * a, rhs = 5 * b * b;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

// Fibonacci chain by direct enumeration: x = n + m*phi, x* = n - m/phi, x* in [-1, phi - 1].
// In units of 1/2: 2x = (2n + m) + m*sqrt5, 2x* = (2n + m) - m*sqrt5.
std::set<std::pair<long, long>> fibonacci_oracle(long radius) {
  std::set<std::pair<long, long>> out;
  for (long n = -200; n <= 200; ++n)
    for (long m = -200; m <= 200; ++m) {
      const long a = 2 * n + m;
      if (sign_sqrt5(a + 2 * radius, m) < 0 || sign_sqrt5(2 * radius - a, -m) < 0) continue;
      // 2x* >= -2 and 2x* <= -1 + sqrt5
      if (sign_sqrt5(a + 2, -m) < 0 || sign_sqrt5(-1 - a, 1 + m) < 0) continue;
      out.insert({a, m});
    }
  return out;
}

}  // namespace

TEST(Quad, FieldArithmetic) {
  const Quad p = phi();
  EXPECT_EQ(p * p, p + Quad(1));
  EXPECT_EQ(Quad(1) / p, p - Quad(1));
  EXPECT_EQ(p.conjugate(), Quad(1) - p);
  EXPECT_EQ((p - Quad(2)).sign(), -1);
  EXPECT_EQ(p.floor(), 1);
  EXPECT_EQ(p.ceil(), 2);
  EXPECT_THROW(Quad::sqrt(2) + Quad::sqrt(3), InputError);
  EXPECT_THROW(Quad(1) / Quad(0), PreconditionError);
}

TEST(Quad, SqrtLowerBrackets) {
  const Integer q("1000000000000000000000000000000");
  const Rational s = sqrt_lower(5, q);
  EXPECT_LE(s * s, 5);
  EXPECT_GT((s + Rational(1, 1) / Rational(q)) * (s + Rational(1, 1) / Rational(q)), 5);
}

TEST(GroupBasis, RankAndDiscreteness) {
  const GroupBasis z = group_basis({{Quad(2)}, {Quad(3)}}, 1);
  EXPECT_EQ(z.z_rank, 1u);
  EXPECT_TRUE(z.discrete());
  const GroupBasis dense = group_basis({{Quad(1)}, {phi()}}, 1);
  EXPECT_EQ(dense.z_rank, 2u);
  EXPECT_EQ(dense.r_rank, 1u);
  EXPECT_FALSE(dense.discrete());
}

TEST(Generate, IntegerScheme) {
  const GeneratedPatch g = generate(integer_scheme(), Box::cube(1, 10));
  EXPECT_EQ(g.patch.size(), 21u);
  EXPECT_TRUE(g.ambiguous.empty());
  EXPECT_EQ(g.error_bound, 0);
}

TEST(Generate, FibonacciMatchesDirectEnumeration) {
  const auto exact = generate_exact(fibonacci_scheme(), Box::cube(1, 50));
  const auto oracle = fibonacci_oracle(50);
  std::set<std::pair<long, long>> got;
  for (const auto& x : exact) {
    // 2x = a + m sqrt5 with x = n + m phi.
    const Rational two_a = 2 * x[0].a();
    const Rational two_b = 2 * x[0].b();
    ASSERT_EQ(two_a.get_den(), 1);
    ASSERT_EQ(two_b.get_den(), 1);
    got.insert({two_a.get_num().get_si(), two_b.get_num().get_si()});
  }
  EXPECT_EQ(got, oracle);
}

TEST(Generate, FibonacciGapsAreOneAndPhi) {
  const auto exact = generate_exact(fibonacci_scheme(), Box::cube(1, 50));
  std::map<Quad, int> gaps;
  for (std::size_t i = 1; i < exact.size(); ++i) ++gaps[exact[i][0] - exact[i - 1][0]];
  // Both window endpoints are hit by the orbit, which adds one short gap between -phi and -1.
  ASSERT_EQ(gaps.size(), 3u);
  EXPECT_EQ(gaps[Quad(1) / phi()], 1);
  EXPECT_GT(gaps[Quad(1)], 1);
  EXPECT_GT(gaps[phi()], 1);
  const GeneratedPatch g = generate(fibonacci_scheme(), Box::cube(1, 50));
  EXPECT_EQ(g.patch.size(), exact.size());
  EXPECT_EQ(g.radicand, 5);
  EXPECT_LE(g.error_bound, Rational(1, 1000000));
}

TEST(Generate, DegenerateWindowKeepsOneOrbit) {
  Scheme s = fibonacci_scheme();
  s.window = {QuadBox{{Quad(0)}, {Quad(0)}}};
  const auto pts = generate_exact(s, Box::cube(1, 50));
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0][0], Quad(0));
}

TEST(Generate, MonotoneInWindow) {
  Scheme small = fibonacci_scheme();
  small.window = {QuadBox{{Quad(Rational(-1, 2))}, {Quad(Rational(1, 2))}}};
  const auto a = generate_exact(small, Box::cube(1, 40));
  const auto b = generate_exact(fibonacci_scheme(), Box::cube(1, 40));
  const std::set<QuadVec, decltype(&quad_less)> big(b.begin(), b.end(), &quad_less);
  for (const auto& x : a) EXPECT_TRUE(big.count(x));
  EXPECT_LT(a.size(), b.size());
}

TEST(Generate, ShiftsAreApplied) {
  Scheme s = integer_scheme();
  s.generators = {{Quad(3)}};
  s.shifts = {{Quad(0)}, {Quad(1)}};
  const auto pts = generate(s, Box::cube(1, 6)).patch;
  EXPECT_EQ(as_longs(pts.to_set()), (std::vector<long>{-6, -5, -3, -2, 0, 1, 3, 4, 6}));
}

TEST(Generate, NonDiscreteGroupRejected) {
  Scheme s = integer_scheme();
  s.generators = {{Quad(1)}, {phi()}};
  EXPECT_THROW(generate(s, Box::cube(1, 5)), PreconditionError);
}

TEST(Conditions, Fibonacci) {
  const ConditionReport r = check_conditions(fibonacci_scheme());
  EXPECT_TRUE(r.lattice);
  EXPECT_TRUE(r.injective);
  EXPECT_TRUE(r.dense);
  EXPECT_TRUE(r.all());
}

TEST(Conditions, RankDeficient) {
  const ConditionReport r = check_conditions(one_one({{Quad(1), Quad(0)}}, Quad(-1), Quad(1)));
  EXPECT_FALSE(r.lattice);
}

TEST(Conditions, KernelWitness) {
  const ConditionReport r = check_conditions(one_one({{Quad(0), Quad(1)}, {Quad(1), Quad(0)}}, Quad(-1), Quad(1)));
  EXPECT_TRUE(r.lattice);
  EXPECT_FALSE(r.injective);
  ASSERT_TRUE(r.kernel_witness.has_value());
  EXPECT_EQ(r.kernel_witness->at(0), Quad(0));
  EXPECT_EQ(r.kernel_witness->at(1).abs(), Quad(1));
}

TEST(Conditions, RationalInternalImageIsNotDense) {
  const ConditionReport r = check_conditions(one_one({{Quad(1), Quad(1)}, {Quad::sqrt(2), Quad(0)}}, Quad(-1), Quad(1)));
  EXPECT_TRUE(r.lattice);
  EXPECT_TRUE(r.injective);
  EXPECT_FALSE(r.dense);
  EXPECT_TRUE(r.dual_witness.has_value());
}

TEST(Reduce, NotLatticeDropsInternalAxis) {
  const Scheme s = one_one({{Quad(1), Quad(0)}}, Quad(-1), Quad(1));
  const ReduceResult r = reduce(s);
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_EQ(r.steps[0].branch, Branch::NotLattice);
  EXPECT_EQ(r.scheme.e, 0u);
  EXPECT_TRUE(r.steps[0].containment_ok);
  const auto before = generate(s, Box::cube(1, 20)).patch;
  const auto after = generate(r.scheme, Box::cube(1, 20)).patch;
  EXPECT_EQ(before.points(), after.points());
}

TEST(Reduce, NotInjectiveCollapsesInternalAxis) {
  const Scheme s = one_one({{Quad(1), Quad(0)}, {Quad(0), Quad(1)}}, Quad(-1), Quad(1));
  const ReduceResult r = reduce(s);
  ASSERT_FALSE(r.steps.empty());
  EXPECT_EQ(r.steps[0].branch, Branch::NotInjective);
  EXPECT_EQ(r.steps[0].gamma[0], Quad(0));
  EXPECT_EQ(r.scheme.e, 0u);
  EXPECT_EQ(generate(r.scheme, Box::cube(1, 10)).patch.size(), 21u);
}

TEST(Reduce, NotDenseSplitsIntoShifts) {
  const Scheme s = one_one({{Quad(1), Quad(1)}, {Quad::sqrt(2), Quad(0)}}, Quad(-1), Quad(1));
  const ReduceResult r = reduce(s);
  ASSERT_EQ(r.steps.size(), 1u);
  const ReductionStep& step = r.steps[0];
  EXPECT_EQ(step.branch, Branch::NotDense);
  EXPECT_EQ(step.n_max, 1);
  EXPECT_EQ(step.slices, (std::vector<long>{-1, 0, 1}));
  EXPECT_EQ(r.scheme.e, 0u);
  EXPECT_TRUE(step.containment_ok);
  EXPECT_GT(step.probe_points, 0u);
  EXPECT_TRUE(verify_step_containment(step, 20));
}

TEST(Reduce, EveryStepLowersInternalDimension) {
  for (const Scheme& s : {one_one({{Quad(1), Quad(0)}}, Quad(-1), Quad(1)),
                          one_one({{Quad(1), Quad(0)}, {Quad(0), Quad(1)}}, Quad(-1), Quad(1)),
                          one_one({{Quad(1), Quad(1)}, {Quad::sqrt(2), Quad(0)}}, Quad(-1), Quad(1))}) {
    const ReduceResult r = reduce(s);
    for (const auto& st : r.steps) EXPECT_LT(st.after.e, st.before.e);
    EXPECT_TRUE(r.final_report.lattice);
    EXPECT_TRUE(r.final_report.injective);
  }
}

TEST(Reduce, FibonacciNeedsNoSteps) {
  const ReduceResult r = reduce(fibonacci_scheme());
  EXPECT_TRUE(r.steps.empty());
  EXPECT_TRUE(r.final_report.all());
}

TEST(Reduce, SparseDiagonalGroupAborts) {
  const Scheme s = one_one({{Quad(1), Quad(1)}}, Quad(Rational(-1, 2)), Quad(Rational(1, 2)));
  EXPECT_THROW(reduce(s), PreconditionError);
  ReduceOptions opts;
  opts.check_density = false;
  try {
    reduce(s, opts);
    FAIL() << "expected the orthogonality assertion";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("orthogonal"), std::string::npos) << e.what();
  }
}

TEST(Reduce, ReducedFibonacciPatchIsUniformlyDiscrete) {
  const PointPatch p = generate(fibonacci_scheme(), Box::cube(1, 40)).patch;
  EXPECT_GT(discreteness_radius(p), 0);
  std::vector<RatVec> inner;
  for (const auto& x : p.points())
    if (Box::cube(1, 20).contains(x)) inner.push_back(x);
  const FiniteSet core(1, inner);
  const FiniteSet diff = difference(core, core);
  EXPECT_GT(discreteness_radius(PointPatch(1, {diff.begin(), diff.end()}, Box::cube(1, 40))), 0);
}
