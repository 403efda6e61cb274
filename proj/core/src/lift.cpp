#include "meyer/lift.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "meyer/errors.hpp"
#include "meyer/toruscover.hpp"

namespace meyer {

PointPatch extract_patch(const PointPatch& a, const Rational& n) {
  if (sgn(n) < 0) throw InputError("patch radius must be nonnegative");
  const Box ball = Box::cube(a.dim(), n);
  if (a.empty()) return PointPatch(a.dim(), {}, ball);
  if (!a.region().contains(ball))
    throw InputError("radius " + to_string(n) + " exceeds the region of the patch");
  return a.restricted(ball);
}

DoublingProfile doubling_profile(const PointPatch& a, const std::vector<Rational>& schedule) {
  if (schedule.empty()) throw InputError("empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw InputError("schedule must be increasing");
  DoublingProfile out;
  PointPatch last;
  for (const auto& n : schedule) {
    const PointPatch p = extract_patch(a, n);
    if (p.empty()) throw PreconditionError("empty patch at N = " + to_string(n));
    const FiniteSet s = p.to_set();
    DoublingRow row;
    row.n = n;
    row.size = s.size();
    row.difference_size = difference(s, s).size();
    row.ratio = Rational(static_cast<long>(row.difference_size)) / static_cast<long>(row.size);
    out.rows.push_back(row);
    last = p;
  }
  const Rational n = schedule.back();
  const std::vector<Rational> radii{n / 4, n / 2};
  const FiniteSet s = last.to_set();
  const FiniteSet diff = difference(s, s);
  const PointPatch dpatch(a.dim(), diff.elements(), Box::cube(a.dim(), 2 * n));
  out.lower_density = density_report(last, radii).lower_estimate;
  out.upper_difference_density = density_report(dpatch, radii).upper_estimate;
  if (sgn(out.lower_density) > 0) {
    Rational four_d = 1;
    for (std::size_t i = 0; i < a.dim(); ++i) four_d *= 4;
    out.bound = four_d * out.upper_difference_density / out.lower_density;
    out.within_bound = std::all_of(out.rows.begin(), out.rows.end(),
                                   [&](const DoublingRow& r) { return r.ratio <= *out.bound; });
    out.small_doubling = out.rows.back().ratio <= *out.bound;
  }
  return out;
}

std::string to_string(CoverPath p) { return p == CoverPath::Search ? "search" : "proof"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Stabilized: return "stabilized";
    case Verdict::Drifting: return "drifting";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Search over mQ for points near `target`.
CoefficientSearch gap_search(const Gap& q, long m, const RatVec& target, const Rational& radius,
                             std::uint64_t budget) {
  CoefficientSearch s;
  s.vectors = q.steps();
  for (long l : q.lengths()) {
    s.lo.push_back(-m * l);
    s.hi.push_back(m * l);
  }
  s.target = target;
  s.radius = radius;
  s.budget = budget;
  return s;
}

// Point of mQ nearest to f within `radius`, ties broken by coefficient order.
std::optional<std::pair<std::vector<long>, RatVec>> nearest_in(const Gap& q, long m, const RatVec& f,
                                                               const Rational& radius, std::uint64_t budget) {
  std::optional<std::pair<std::vector<long>, RatVec>> best;
  Rational best_dist;
  gap_search(q, m, f, radius, budget).run([&](const std::vector<long>& n, const RatVec& v) {
    const Rational dist = sup_dist(v, f);
    if (!best || dist < best_dist) {
      best = {n, v};
      best_dist = dist;
    }
    return true;
  });
  return best;
}

std::optional<std::vector<long>> member_of(const Gap& q, long m, const RatVec& x, std::uint64_t budget) {
  std::optional<std::vector<long>> found;
  gap_search(q, m, x, 0, budget).run([&](const std::vector<long>& n, const RatVec&) {
    found = n;
    return false;
  });
  return found;
}

// A ⊆ F' + kQ.
bool covers(const FiniteSet& a, const FiniteSet& f, const Gap& q, long k, std::uint64_t budget) {
  for (const auto& x : a) {
    bool hit = false;
    for (const auto& y : f)
      if (member_of(q, k, sub(x, y), budget)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

NormalizedCover search_path(const PointPatch& a_n, const CoverResult& cover, const Rational& n,
                            const NormalizeOptions& options) {
  const FiniteSet a = a_n.to_set();
  for (long k = 1; k <= options.k_max; ++k) {
    std::vector<RatVec> fp;
    bool ok = true;
    for (const auto& f : cover.f) {
      if (k == 1) {
        fp.push_back(f);
      } else {
        const auto q = nearest_in(cover.q, k - 1, f, n, options.budget);
        if (!q) {
          ok = false;
          break;
        }
        fp.push_back(sub(f, q->second));
      }
      if (sup_norm(fp.back()) > n) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    FiniteSet f_prime(a.dim(), std::move(fp));
    if (!covers(a, f_prime, cover.q, k, options.budget)) continue;
    NormalizedCover out;
    out.f_prime = std::move(f_prime);
    out.k = k;
    out.path = CoverPath::Search;
    return out;
  }
  throw CertificateFailure("no k <= " + std::to_string(options.k_max) + " gives A ⊆ F' + kQ with F' ⊆ B(0, N)");
}

// Inner raster of 2Q + B(0, 2s) inside [-10N, 10N]^d, mapped to [0,1]^d.
GridSet raster_thickening(const Gap& q, const Rational& n, const Rational& s, std::uint64_t budget) {
  const std::size_t d = q.dim();
  const std::size_t res = d == 1 ? 1024 : 64;
  GridSet grid(d, res);
  const Rational width = 20 * n / static_cast<long>(res);
  const Rational radius = 2 * s - width / 2;
  if (sgn(radius) < 0) return grid;
  std::vector<std::size_t> cell(d, 0);
  while (true) {
    RatVec center(d);
    for (std::size_t i = 0; i < d; ++i)
      center[i] = -10 * n + width * static_cast<long>(cell[i]) + width / 2;
    bool hit = false;
    gap_search(q, 2, center, radius, budget).run([&](const std::vector<long>&, const RatVec&) {
      hit = true;
      return false;
    });
    if (hit) grid.set(cell);
    std::size_t i = 0;
    while (i < d && ++cell[i] == res) cell[i++] = 0;
    if (i == d) break;
  }
  return grid;
}

std::optional<NormalizedCover> proof_path(const PointPatch& a_n, const CoverResult& cover, const Rational& n,
                                          const NormalizeOptions& options, std::string& why) {
  NormalizedCover out;
  out.path = CoverPath::Proof;
  const std::size_t d = a_n.dim();
  if (d > 2) {
    why = "proof path rasterises only d <= 2";
    return std::nullopt;
  }
  const Rational cr = covering_radius(a_n, a_n.region());
  const Integer s = std::max(Integer(1), ceil_of(cr));
  out.scale = ratio(1, s);
  const GridSet grid = raster_thickening(cover.q, n, Rational(s), options.budget);
  out.raster_measure = grid.measure();
  if (sgn(out.raster_measure) == 0) {
    why = "rasterised thickening is empty";
    return std::nullopt;
  }
  CoverCertificate cert;
  try {
    cert = cover_unit_cube(grid, out.raster_measure);
  } catch (const PreconditionError& e) {
    why = std::string("torus covering failed: ") + e.what();
    return std::nullopt;
  }
  if (!verify_cover_certificate(grid, cert)) {
    why = "torus covering certificate did not verify";
    return std::nullopt;
  }
  out.k1 = cert.k;
  out.k = 8 * out.k1 + 2;
  std::vector<RatVec> fp;
  for (const auto& f : cover.f) {
    const auto q = nearest_in(cover.q, 4 * out.k1, f, Rational(4 * out.k1) * Rational(s), options.budget);
    if (!q) {
      why = "some f has no point of 4k1 Q within 4k1";
      return std::nullopt;
    }
    // f + 2Q = f' + q + 2Q ⊆ f' + kQ since |n_i| + 2 l_i <= k l_i.
    for (std::size_t i = 0; i < q->first.size(); ++i)
      if (std::labs(q->first[i]) + 2 * cover.q.lengths()[i] > out.k * cover.q.lengths()[i]) {
        why = "coefficient bound of F + 2Q ⊆ F' + kQ failed";
        return std::nullopt;
      }
    fp.push_back(sub(f, q->second));
  }
  out.f_prime = FiniteSet(d, std::move(fp));
  if (!covers(a_n.to_set(), out.f_prime, cover.q, out.k, options.budget)) {
    why = "A ⊆ F' + kQ did not verify";
    return std::nullopt;
  }
  out.proof_certified = true;
  return out;
}

}  // namespace

NormalizedCover normalize_cover(const PointPatch& a_n, const CoverResult& cover, const Rational& n,
                                const NormalizeOptions& options) {
  if (!cover.success) throw PreconditionError("cover is not certified");
  if (!cover.q.symmetric()) throw PreconditionError("cover GAP must be symmetric");
  if (options.path == CoverPath::Proof) {
    std::string why;
    if (auto r = proof_path(a_n, cover, n, options, why)) return *r;
    NormalizedCover out = search_path(a_n, cover, n, options);
    out.fell_back = true;
    out.note = why;
    return out;
  }
  return search_path(a_n, cover, n, options);
}

LambdaBasis build_lambda(const CoverResult& cover) {
  const Gap& q = cover.q;
  LambdaBasis out;
  out.d = q.dim();
  for (std::size_t i = 0; i < q.rank(); ++i) (q.lengths()[i] > 0 ? out.kept : out.dropped).push_back(i);
  out.e = out.kept.size();
  for (std::size_t j = 0; j < out.e; ++j) {
    const std::size_t i = out.kept[j];
    RatVec v = q.steps()[i];
    v.resize(out.d + out.e, Rational(0));
    v[out.d + j] = Rational(1) / q.lengths()[i];
    out.vectors.push_back(std::move(v));
  }
  if (rank(out.vectors, out.d + out.e) != out.e) throw CertificateFailure("lifted vectors are dependent");
  return out;
}

DiscretenessCertificate certify_discreteness(const std::vector<RatVec>& basis, std::uint64_t budget) {
  DiscretenessCertificate out;
  if (basis.empty()) {
    // The trivial group is r-discrete for every r.
    out.r = 1;
    out.certified = true;
    return out;
  }
  const std::size_t cols = basis[0].size();
  if (rank(basis, cols) != basis.size()) throw PreconditionError("basis is not independent");
  Rational r0 = sup_norm(basis[0]);
  out.shortest.assign(basis.size(), 0);
  out.shortest[0] = 1;
  for (std::size_t i = 1; i < basis.size(); ++i)
    if (sup_norm(basis[i]) < r0) {
      r0 = sup_norm(basis[i]);
      out.shortest.assign(basis.size(), 0);
      out.shortest[i] = 1;
    }
  out.r = r0;
  out.searched_radius = r0;
  const auto p = right_inverse(basis, cols);
  CoefficientSearch s;
  s.vectors = basis;
  s.target = zero_vec(cols);
  s.radius = r0;
  s.budget = budget;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    Rational b;
    for (std::size_t i = 0; i < cols; ++i) b += abs_of((*p)[i][j]);
    const long m = floor_of(b * r0).get_si();
    s.lo.push_back(-m);
    s.hi.push_back(m);
  }
  try {
    out.explored = s.run([&](const std::vector<long>& n, const RatVec& v) {
      if (std::all_of(n.begin(), n.end(), [](long x) { return x == 0; })) return true;
      const Rational norm = sup_norm(v);
      if (norm < out.r) {
        out.r = norm;
        out.shortest = n;
      }
      return true;
    });
    out.certified = sgn(out.r) > 0;
  } catch (const BudgetExceeded&) {
    out.certified = false;
  }
  return out;
}

ContainmentCertificate certify_containment(const PointPatch& a_n, const FiniteSet& f_prime, const CoverResult& cover,
                                           long k, const Box& core, std::uint64_t budget) {
  ContainmentCertificate out;
  const Gap& q = cover.q;
  for (const auto& x : a_n.points()) {
    if (!core.contains(x)) continue;
    bool hit = false;
    for (const auto& y : f_prime) {
      const auto n = member_of(q, k, sub(x, y), budget);
      if (!n) continue;
      ContainmentWitness w{x, y, *n, {}};
      for (std::size_t i = 0; i < q.rank(); ++i)
        if (q.lengths()[i] > 0) w.internal.push_back(Rational((*n)[i]) / q.lengths()[i]);
      out.witnesses.push_back(std::move(w));
      hit = true;
      break;
    }
    if (!hit) {
      out.offending = x;
      return out;
    }
  }
  out.ok = true;
  return out;
}

LiftCertificate lift_at(const PointPatch& a, const Rational& n, const LiftOptions& options) {
  LiftCertificate c;
  c.n_value = n;
  const PointPatch a_n = extract_patch(a, n);
  if (a_n.empty()) throw PreconditionError("empty patch at N = " + to_string(n));
  if (n <= options.core_inset) throw InputError("core inset leaves no core at N = " + to_string(n));
  const FiniteSet s = a_n.to_set();
  c.k_doubling = doubling_constant(s, negate(s));
  CoverOptions co = options.cover;
  co.budget = options.budget;
  c.cover = find_cover(s, co);
  if (!c.cover.success)
    throw CertificateFailure("no certified cover with rank <= " + std::to_string(co.max_rank) +
                             " and |F| <= " + std::to_string(co.max_f) + " at N = " + to_string(n));
  NormalizeOptions no = options.normalize;
  no.budget = options.budget;
  c.normalized = normalize_cover(a_n, c.cover, n, no);
  c.k_cover = c.normalized.k;
  c.lambda = build_lambda(c.cover);
  c.discreteness = certify_discreteness(c.lambda.vectors, options.budget);
  c.core = Box::cube(a.dim(), n - options.core_inset);
  c.containment = certify_containment(a_n, c.normalized.f_prime, c.cover, c.k_cover, c.core, options.budget);
  c.containment_ok = c.containment.ok;
  return c;
}

std::vector<RatVec> canonical_steps(const LambdaBasis& basis) {
  if (basis.vectors.empty()) return {};
  std::vector<RatVec> phys;
  for (const auto& v : basis.vectors) phys.emplace_back(v.begin(), v.begin() + static_cast<long>(basis.d));
  const Integer l = common_denominator(phys);
  IntMatrix ints;
  for (const auto& v : phys) {
    std::vector<Integer> row;
    for (const auto& x : v) row.push_back(x.get_num() * (l / x.get_den()));
    ints.push_back(std::move(row));
  }
  std::vector<RatVec> out;
  for (const auto& row : hermite_rows(ints, basis.d)) {
    RatVec v;
    for (const auto& x : row) v.push_back(ratio(x, l));
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

std::optional<Rational> matrix_distance(const std::vector<RatVec>& a, const std::vector<RatVec>& b) {
  if (a.size() != b.size()) return std::nullopt;
  Rational m;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return std::nullopt;
    const Rational x = sup_dist(a[i], b[i]);
    if (x > m) m = x;
  }
  return m;
}

std::optional<Rational> hausdorff(const FiniteSet& a, const FiniteSet& b) {
  if (a.empty() && b.empty()) return Rational(0);
  if (a.empty() || b.empty()) return std::nullopt;
  auto one_way = [](const FiniteSet& x, const FiniteSet& y) {
    Rational worst;
    for (const auto& p : x) {
      Rational best = sup_dist(p, y[0]);
      for (const auto& q : y) best = std::min(best, sup_dist(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

}  // namespace

StabilizationReport stabilize(const PointPatch& a, const std::vector<Rational>& schedule, const LiftOptions& options) {
  StabilizationReport rep;
  rep.schedule = schedule;
  rep.tolerance = options.tolerance;
  rep.doubling = doubling_profile(a, schedule);
  for (const auto& n : schedule) {
    try {
      LiftCertificate c = lift_at(a, n, options);
      if (!c.containment_ok) {
        rep.failures.push_back(to_string(n) + ": containment failed at " + to_string(*c.containment.offending));
        continue;
      }
      rep.certificates.push_back(std::move(c));
    } catch (const BudgetExceeded&) {
      throw;
    } catch (const Error& e) {
      rep.failures.push_back(to_string(n) + ": " + e.what());
    }
  }
  for (std::size_t i = 1; i < rep.certificates.size(); ++i) {
    const auto& p = rep.certificates[i - 1];
    const auto& c = rep.certificates[i];
    rep.basis_drift.push_back(matrix_distance(canonical_steps(p.lambda), canonical_steps(c.lambda)));
    rep.f_prime_drift.push_back(hausdorff(p.normalized.f_prime, c.normalized.f_prime));
  }
  if (rep.failures.empty() && rep.certificates.size() >= 3) {
    bool steady = true;
    for (std::size_t i = rep.basis_drift.size() - 2; i < rep.basis_drift.size(); ++i) {
      const auto& b = rep.basis_drift[i];
      const auto& f = rep.f_prime_drift[i];
      if (!b || !f || *b > rep.tolerance || *f > rep.tolerance) steady = false;
    }
    rep.verdict = steady ? Verdict::Stabilized : Verdict::Drifting;
  }

  if (!rep.certificates.empty()) {
    const LiftCertificate& last = rep.certificates.back();
    Scheme s;
    s.d = a.dim();
    s.e = last.lambda.e;
    for (const auto& v : last.lambda.vectors) s.generators.push_back(to_quad(v));
    s.window.push_back(QuadBox{QuadVec(s.e, Quad(-last.k_cover)), QuadVec(s.e, Quad(last.k_cover))});
    for (const auto& f : last.normalized.f_prime) s.shifts.push_back(to_quad(f));
    const auto pts = generate_exact(s, last.core, options.budget);
    std::unordered_set<QuadVec, QuadVecHash> have(pts.begin(), pts.end());
    rep.final_cross_check = true;
    for (const auto& x : a.points()) {
      if (!last.core.contains(x)) continue;
      ++rep.final_core_points;
      if (!have.count(to_quad(x))) rep.final_cross_check = false;
    }
    rep.final_scheme = std::move(s);
  }
  return rep;
}

InternalDimensionReport internal_dimension_report(const StabilizationReport& report) {
  InternalDimensionReport out;
  if (report.final_scheme) {
    out.e = report.final_scheme->e;
    out.d = report.final_scheme->d;
  }
  if (!report.certificates.empty()) out.k = report.certificates.back().k_doubling;
  else if (!report.doubling.rows.empty()) out.k = report.doubling.rows.back().ratio;
  if (sgn(out.k) > 0) out.d_log2_k = static_cast<double>(out.d) * std::log2(out.k.get_d());
  return out;
}

}  // namespace meyer
