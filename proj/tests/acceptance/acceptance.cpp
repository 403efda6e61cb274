#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "meyer/errors.hpp"
#include "meyer/freiman.hpp"
#include "meyer/gaps.hpp"
#include "meyer/geometry.hpp"
#include "meyer/io.hpp"
#include "meyer/lift.hpp"
#include "meyer/modelsets.hpp"
#include "meyer/sumsets.hpp"
#include "meyer/toruscover.hpp"

using namespace meyer;

namespace {

// Exact paths compare with zero slack; quadratic-field patches are accepted
// only when the stand-in error is below this bound.
const Rational kExactTolerance = 0;
const Rational kQuadraticTolerance = Rational(1, Integer("100000000000000000000"));
constexpr std::uint32_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fixture(const std::string& name) { return std::string(MEYER_FIXTURES) + "/" + name + ".json"; }
Scheme load_scheme(const std::string& name) { return io::decode_scheme(io::read_json_file(fixture(name))); }

FiniteSet random_ints(std::mt19937& rng, long lo, long hi, std::size_t max_size) {
  std::uniform_int_distribution<long> val(lo, hi);
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  std::vector<long> xs(size(rng));
  for (auto& x : xs) x = val(rng);
  return FiniteSet::of_integers(xs);
}

// Nonempty by resampling.
GridSet random_grid(std::mt19937& rng, std::size_t dim, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= n;
  while (true) {
    GridSet g(dim, n);
    for (std::size_t i = 0; i < total; ++i)
      if (coin(rng)) g.set_flat(i);
    if (!g.empty()) return g;
  }
}

// Union of random boxes grown until the measure reaches eps.
GridSet random_blocks(std::mt19937& rng, std::size_t dim, std::size_t n, const Rational& eps) {
  GridSet g(dim, n);
  std::uniform_int_distribution<std::size_t> pos(0, n - 1), len(1, n / 8);
  while (g.measure() < eps) {
    std::vector<std::size_t> lo(dim), hi(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = pos(rng);
      hi[i] = std::min(n, lo[i] + len(rng));
    }
    const GridSet b = GridSet::box(dim, n, lo, hi);
    for (std::size_t i = 0; i < b.words().size(); ++i) g.words()[i] |= b.words()[i];
  }
  return g;
}

bool proper_by_collision(const Gap& g) {
  std::set<RatVec, LexLess> seen;
  std::vector<long> idx(g.rank(), 0);
  if (g.symmetric())
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = -g.lengths()[i];
  while (true) {
    if (!seen.insert(g.point_at(idx)).second) return false;
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] <= g.lengths()[i]) break;
      idx[i] = g.symmetric() ? -g.lengths()[i] : 0;
    }
    if (i == idx.size()) return true;
  }
}

// A ⊆ F + Q and Q ⊆ 2A - 2A by direct enumeration.
bool cover_oracle(const FiniteSet& a, const CoverResult& r) {
  const FiniteSet q = enumerate(r.q);
  if (!q.is_subset_of(iterated(a, 2, 2).set)) return false;
  if (!r.q.symmetric() && r.q.rank() > 0) return false;
  if (!is_proper(r.q)) return false;
  for (const auto& x : a) {
    bool hit = false;
    for (const auto& f : r.f)
      if (q.contains(sub(x, f))) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

PointPatch periodic_two_block(long r) {
  std::vector<RatVec> pts;
  for (long x = -r; x <= r; ++x) {
    const long m = ((x % 10) + 10) % 10;
    if (m == 0 || m == 1) pts.push_back({Rational(x)});
  }
  return PointPatch(1, pts, Box::cube(1, r));
}

PointPatch integer_patch(long r) {
  std::vector<RatVec> pts;
  for (long x = -r; x <= r; ++x) pts.push_back({Rational(x)});
  return PointPatch(1, pts, Box::cube(1, r));
}

std::vector<RatVec> inside(const PointPatch& p, const Box& b) {
  std::vector<RatVec> out;
  for (const auto& x : p.points())
    if (b.contains(x)) out.push_back(x);
  return out;
}

Outcome inequality_suites() {
  std::mt19937 rng(kSeed);
  std::size_t bad = 0, plun = 0;
  std::uniform_int_distribution<unsigned> fold(0, 5);
  while (plun < 1000) {
    const unsigned k = fold(rng), l = fold(rng);
    if (k + l == 0 || k + l > 5) continue;
    const FiniteSet a = random_ints(rng, 0, 100, 12), b = random_ints(rng, 0, 100, 12);
    bad += !verify_plunnecke(a, b, k, l).holds;
    ++plun;
  }
  for (int t = 0; t < 1000; ++t)
    bad += !verify_ruzsa_triangle(random_ints(rng, 0, 100, 12), random_ints(rng, 0, 100, 12),
                                  random_ints(rng, 0, 100, 12)).holds;
  std::uniform_real_distribution<double> dens(0.001, 0.6);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 1 + t % 2;
    const GridSet a = random_grid(rng, d, 256, dens(rng) * (d == 1 ? 1.0 : 0.2));
    const GridSet b = random_grid(rng, d, 256, dens(rng) * (d == 1 ? 1.0 : 0.2));
    const Rational lhs = torus_sum(a, b).measure();
    if (lhs < std::min(Rational(a.measure() + b.measure()), Rational(1))) ++bad;
  }
  return {bad == 0, "3000 cases, " + std::to_string(bad) + " violations"};
}

Outcome gap_suite() {
  std::mt19937 rng(kSeed + 1);
  std::uniform_int_distribution<long> step(-60, 60), coord(-40, 40);
  std::uniform_int_distribution<int> rank_d(1, 3), dim_d(1, 2);
  std::size_t proper = 0, tried = 0, disagree = 0, bad = 0;
  while (proper < 500) {
    const std::size_t r = rank_d(rng), d = dim_d(rng);
    std::vector<RatVec> steps;
    std::vector<long> lengths;
    long size = 1;
    for (std::size_t i = 0; i < r; ++i) {
      RatVec s(d);
      for (auto& x : s) x = d == 1 ? Rational(step(rng)) : Rational(coord(rng));
      steps.push_back(s);
      const long cap = std::max<long>(1, static_cast<long>(std::pow(2000.0, 1.0 / r)) - 1);
      lengths.push_back(std::uniform_int_distribution<long>(0, cap)(rng));
      size *= lengths.back() + 1;
    }
    if (size > 2000) continue;
    const Gap g(steps, lengths, RatVec(d, 0), false);
    ++tried;
    const bool p = is_proper(g);
    if (p != proper_by_collision(g)) ++disagree;
    if (!p) continue;
    ++proper;
    const DoublingReport rep = doubling_check(g);
    // P + P is the GAP with the same steps and doubled lengths.
    std::vector<long> doubled = lengths;
    for (auto& l : doubled) l *= 2;
    const Integer twice = Integer(enumerate(Gap(steps, doubled, RatVec(d, 0), false)).size());
    if (!rep.holds || rep.sumset_size != twice || Rational(twice) > Rational(Integer(1) << r) * Rational(size)) ++bad;
  }
  std::ostringstream s;
  s << proper << " proper of " << tried << " GAPs, " << bad << " doubling violations, " << disagree
    << " properness disagreements";
  return {bad == 0 && disagree == 0, s.str()};
}

Outcome freiman_suite() {
  std::mt19937 rng(kSeed + 2);
  std::uniform_int_distribution<long> step(1, 50), len(0, 6);
  std::uniform_real_distribution<double> keep(0.5, 1.0);
  std::size_t done = 0, failed = 0, too_big = 0, unverified = 0;
  std::vector<FiniteSet> bases;
  while (done < 200) {
    const bool two = done % 2;
    std::vector<RatVec> steps{{Rational(step(rng))}};
    std::vector<long> lengths{len(rng) + 1};
    if (two) {
      steps.push_back({Rational(step(rng) * 7 + 50)});
      lengths.push_back(len(rng));
    }
    const Gap g(steps, lengths, {Rational(0)}, true);
    if (!is_proper(g) || g.size() > 200) continue;
    std::bernoulli_distribution coin(keep(rng));
    std::vector<RatVec> pts;
    for (const auto& x : enumerate(g))
      if (coin(rng)) pts.push_back(x);
    if (pts.empty()) continue;
    const FiniteSet a(1, pts);
    ++done;
    bases.push_back(a);
    CoverOptions opts;
    opts.max_rank = 2;
    opts.max_f = 9;
    const CoverResult r = find_cover(a, opts);
    if (!r.success) {
      ++failed;
      continue;
    }
    if (r.f.size() > 9) ++too_big;
    if (!verify_cover(a, r) || !cover_oracle(a, r)) ++unverified;
  }
  std::size_t adv_success = 0, adv_failure = 0;
  std::uniform_int_distribution<long> far(-5000, 5000);
  for (int t = 0; t < 50; ++t) {
    std::vector<RatVec> pts(bases[t].begin(), bases[t].end());
    pts[t % pts.size()][0] += Rational(1, 2 + t % 5);
    if (t % 3 == 0) pts.push_back({Rational(far(rng))});
    if (t % 4 == 0) pts.push_back({Rational(far(rng), 3)});
    const FiniteSet a(1, pts);
    CoverOptions opts;
    opts.max_rank = 2;
    opts.max_f = 9;
    opts.budget = 2'000'000;
    const CoverResult r = find_cover(a, opts);
    if (r.success) {
      ++adv_success;
      if (!verify_cover(a, r) || !cover_oracle(a, r)) ++unverified;
    } else {
      ++adv_failure;
    }
  }
  std::ostringstream s;
  s << "200 GAP subsets: " << failed << " failures, " << too_big << " with |F|>9; 50 perturbed: " << adv_success
    << " verified covers, " << adv_failure << " explicit failures; " << unverified << " unverified successes";
  return {failed == 0 && too_big == 0 && unverified == 0, s.str()};
}

Outcome torus_suite() {
  std::mt19937 rng(kSeed + 3);
  std::size_t cases = 0, over = 0, uncovered = 0, errors = 0;
  std::string first_error;
  for (const Rational eps : {Rational(1, 2), Rational(1, 4), Rational(1, 8)}) {
    for (std::size_t d = 1; d <= 2; ++d) {
      const long c = ceil_of(1 / eps).get_si();
      const long bound = static_cast<long>(d) * (2 * c * c + c);
      for (int t = 0; t < 20; ++t) {
        GridSet a;
        if (t % 2 == 0) {
          std::uniform_real_distribution<double> extra(0.02, 0.2);
          do a = random_grid(rng, d, 1024, eps.get_d() + extra(rng));
          while (a.measure() < eps);
        } else {
          a = random_blocks(rng, d, 1024, eps);
        }
        ++cases;
        try {
          const CoverCertificate cert = cover_unit_cube(a, eps);
          if (cert.k > bound) ++over;
          if (!verify_cover_certificate(a, cert)) ++uncovered;
        } catch (const Error& e) {
          ++errors;
          if (first_error.empty()) first_error = e.what();
        }
      }
    }
  }
  std::ostringstream s;
  s << cases << " sets: " << over << " over the k bound, " << uncovered << " not covered, " << errors << " errors";
  if (!first_error.empty()) s << " (" << first_error << ")";
  return {over == 0 && uncovered == 0 && errors == 0, s.str()};
}

Outcome reduction_suite() {
  std::size_t bad = 0;
  std::ostringstream s;
  for (const char* name : {"non_lattice", "non_injective", "non_dense", "fibonacci"}) {
    const Scheme scheme = load_scheme(name);
    ReduceOptions opts;
    opts.probe_radius = 30;
    try {
      const ReduceResult r = reduce(scheme, opts);
      bool ok = r.steps.size() <= scheme.e;
      for (const auto& step : r.steps) {
        ok = ok && step.after.e < step.before.e && step.containment_checked && step.containment_ok;
        ok = ok && verify_step_containment(step, 30);
      }
      ok = ok && r.final_report.lattice && r.final_report.injective;
      s << name << ": " << r.steps.size() << " step(s) e " << scheme.e << "->" << r.scheme.e << (ok ? "" : " BAD") << "; ";
      bad += !ok;
    } catch (const Error& e) {
      s << name << ": " << e.what() << "; ";
      ++bad;
    }
  }
  return {bad == 0, s.str()};
}

struct EndToEnd {
  StabilizationReport integers, two_block, fibonacci;
  bool integers_ok = false, two_block_ok = false, fibonacci_ok = false;
  std::string detail;
};

EndToEnd end_to_end() {
  EndToEnd out;
  std::ostringstream s;

  LiftOptions zopt;
  zopt.tolerance = kExactTolerance;
  out.integers = stabilize(integer_patch(100), {10, 20, 40}, zopt);
  const std::size_t ze = out.integers.certificates.empty() ? 99 : out.integers.certificates.back().lambda.e;
  out.integers_ok = out.integers.verdict == Verdict::Stabilized && out.integers.final_cross_check && ze <= 1;
  s << "(a) Z " << to_string(out.integers.verdict) << " e=" << ze << " regen=" << out.integers.final_cross_check << "; ";

  LiftOptions bopt;
  bopt.tolerance = kExactTolerance;
  bopt.cover.max_f = 1;
  const PointPatch blocks = periodic_two_block(100);
  out.two_block = stabilize(blocks, {30, 60, 90}, bopt);
  bool core_ok = false;
  std::size_t rank = 0;
  if (!out.two_block.certificates.empty()) {
    const LiftCertificate& last = out.two_block.certificates.back();
    rank = last.cover.q.rank();
    const PointPatch a_n = extract_patch(blocks, last.n_value);
    const ContainmentCertificate c =
        certify_containment(a_n, last.normalized.f_prime, last.cover, last.k_cover, Box::cube(1, 50));
    core_ok = c.ok && c.witnesses.size() == inside(blocks, Box::cube(1, 50)).size();
  }
  const bool lambda_ok = !out.two_block.certificates.empty() && out.two_block.certificates.back().lambda.vectors.size() == 2;
  out.two_block_ok = out.two_block.verdict == Verdict::Stabilized && rank == 2 && lambda_ok && core_ok;
  s << "(b) two-block " << to_string(out.two_block.verdict) << " rank=" << rank << " core[-50,50]=" << core_ok << "; ";

  const Scheme fib = load_scheme("fibonacci");
  const GeneratedPatch g = generate(fib, Box::cube(1, 100));
  LiftOptions fopt;
  out.fibonacci = stabilize(g.patch, {100}, fopt);
  std::size_t fe = 0;
  bool against_original = false;
  if (out.fibonacci.final_scheme && !out.fibonacci.certificates.empty()) {
    const LiftCertificate& last = out.fibonacci.certificates.back();
    fe = last.lambda.e;
    // The final scheme's regeneration, compared with a fresh run of the original scheme on the core.
    const GeneratedPatch mine = generate(*out.fibonacci.final_scheme, last.core);
    const GeneratedPatch orig = generate(fib, last.core);
    std::set<RatVec, LexLess> have(mine.patch.points().begin(), mine.patch.points().end());
    against_original = !orig.patch.empty();
    for (const auto& x : orig.patch.points()) against_original = against_original && have.count(x);
  }
  out.fibonacci_ok = fe == 1 && out.fibonacci.final_cross_check && against_original && g.error_bound <= kQuadraticTolerance;
  s << "(c) Fibonacci e=" << fe << " regen=" << out.fibonacci.final_cross_check << " vs original=" << against_original
    << " stand-in error " << g.error_bound.get_d();
  out.detail = s.str();
  return out;
}

Outcome implication_suite() {
  std::size_t bad = 0;
  std::ostringstream s;
  for (const char* name : {"fibonacci", "integers", "two_block", "non_lattice", "non_injective", "non_dense", "wrong_fibonacci"}) {
    const PointPatch p = generate(load_scheme(name), Box::cube(1, 40)).patch;
    const Box core = Box::cube(1, 20);
    const auto f = check_condition_iii(p, core, 16);
    const bool iii = f && verify_condition_iii(p, core, *f);
    const FiniteSet c(1, inside(p, core));
    const FiniteSet diff = difference(c, c);
    const Rational r_diff = discreteness_radius(PointPatch(1, {diff.begin(), diff.end()}, Box::cube(1, 40)));
    const Rational r = discreteness_radius(p);
    const DensityReport dens = density_report(p, {10});
    Rational cap = 2 / r;
    const bool i = dens.upper_estimate <= cap;
    const bool ok = iii && r_diff > 0 && i;
    s << name << (ok ? " ok" : " FAIL") << " |F|=" << (f ? f->size() : 0) << "; ";
    bad += !ok;
  }
  return {bad == 0, s.str()};
}

Outcome dimension_suite(const EndToEnd& e2e) {
  std::ostringstream s;
  std::size_t bad = 0;
  const std::pair<const char*, const StabilizationReport*> runs[] = {
      {"Z", &e2e.integers}, {"two-block", &e2e.two_block}, {"Fibonacci", &e2e.fibonacci}};
  for (const auto& [name, rep] : runs) {
    if (rep->certificates.empty()) {
      ++bad;
      s << name << ": no certificate; ";
      continue;
    }
    const InternalDimensionReport d = internal_dimension_report(*rep);
    const bool ok = d.e == rep->certificates.back().cover.q.rank();
    bad += !ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: e=%zu K=%.4f d*log2K=%.3f%s; ", name, d.e, d.k.get_d(), d.d_log2_k, ok ? "" : " MISMATCH");
    s << buf;
  }
  return {bad == 0, s.str()};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  };

  report(1, "inequality suites", inequality_suites);
  report(2, "GAP doubling and properness", gap_suite);
  report(3, "Freiman covers", freiman_suite);
  report(4, "constructive unit-cube covering", torus_suite);
  report(5, "scheme reduction", reduction_suite);
  EndToEnd e2e;
  report(6, "end-to-end lift", [&] {
    e2e = end_to_end();
    return Outcome{e2e.integers_ok && e2e.two_block_ok && e2e.fibonacci_ok, e2e.detail};
  });
  report(7, "Meyer implications on fixtures", implication_suite);
  report(8, "internal dimension report", [&] { return dimension_suite(e2e); });
  return failures == 0 ? 0 : 1;
}
