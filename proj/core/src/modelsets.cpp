#include "meyer/modelsets.hpp"

#include <algorithm>
#include <unordered_set>

#include "meyer/errors.hpp"

namespace meyer {

bool QuadBox::contains(const QuadVec& x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

void Scheme::validate() const {
  if (d == 0) throw InputError("scheme needs d >= 1");
  for (const auto& g : generators)
    if (g.size() != d + e) throw InputError("generator length differs from d + e");
  if (window.empty()) throw InputError("window must contain at least one box");
  for (const auto& b : window) {
    if (b.lo.size() != e || b.hi.size() != e) throw InputError("window box dimension differs from e");
    for (std::size_t i = 0; i < e; ++i)
      if (b.lo[i] > b.hi[i]) throw InputError("window box has lo > hi");
  }
  for (const auto& s : shifts)
    if (s.size() != d) throw InputError("shift dimension differs from d");
}

std::vector<QuadVec> Scheme::shift_set() const {
  if (shifts.empty()) return {QuadVec(d, Quad(0))};
  return shifts;
}

long Scheme::radicand() const {
  QuadMatrix all = generators;
  for (const auto& b : window) {
    all.push_back(b.lo);
    all.push_back(b.hi);
  }
  for (const auto& s : shifts) all.push_back(s);
  return common_radicand(all);
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::NotLattice: return "not-lattice";
    case Branch::NotInjective: return "not-injective";
    case Branch::NotDense: return "not-dense";
  }
  return "?";
}

GroupBasis group_basis(const QuadMatrix& rows, std::size_t cols) {
  GroupBasis out;
  if (rows.empty()) return out;
  const long d = common_radicand(rows);
  std::vector<RatVec> expanded;
  for (const auto& r : rows) expanded.push_back(rational_expansion(r));
  const Integer l = common_denominator(expanded);
  IntMatrix ints;
  for (const auto& r : expanded) {
    std::vector<Integer> row;
    for (const auto& x : r) row.push_back(x.get_num() * (l / x.get_den()));
    ints.push_back(std::move(row));
  }
  const IntMatrix h = hermite_rows(ints, 2 * cols);
  for (const auto& r : h) {
    QuadVec v(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      const Rational a = ratio(r[j], l), b = ratio(r[cols + j], l);
      v[j] = sgn(b) == 0 ? Quad(a) : Quad(a, b, d);
    }
    out.basis.push_back(std::move(v));
  }
  out.z_rank = out.basis.size();
  out.r_rank = rank(out.basis, cols);
  return out;
}

namespace {

// Visits every group point z with π1(z) in `phys` and π2(z) in the bounding
// box of the window.
template <class Visit>
void enumerate_group(const Scheme& s, const QuadBox& phys, std::uint64_t budget, Visit&& visit) {
  const std::size_t n = s.d + s.e;
  const GroupBasis g = group_basis(s.generators, n);
  if (!g.discrete())
    throw PreconditionError("the generated group is not discrete (Z-rank " + std::to_string(g.z_rank) +
                            " > real rank " + std::to_string(g.r_rank) + ")");
  QuadBox bounds{phys.lo, phys.hi};
  for (std::size_t i = 0; i < s.e; ++i) {
    Quad lo = s.window[0].lo[i], hi = s.window[0].hi[i];
    for (const auto& b : s.window) {
      if (b.lo[i] < lo) lo = b.lo[i];
      if (b.hi[i] > hi) hi = b.hi[i];
    }
    bounds.lo.push_back(lo);
    bounds.hi.push_back(hi);
  }
  const std::size_t r = g.basis.size();
  if (r == 0) {
    const QuadVec zero(n, Quad(0));
    if (bounds.contains(zero)) visit(zero);
    return;
  }
  const auto p = right_inverse(g.basis, n);
  if (!p) throw PreconditionError("group basis is not independent");
  std::vector<long> lo(r), hi(r);
  double total = 1;
  for (std::size_t j = 0; j < r; ++j) {
    Quad center, half;
    for (std::size_t i = 0; i < n; ++i) {
      const Quad& pij = (*p)[i][j];
      center += (bounds.lo[i] + bounds.hi[i]) / Quad(2) * pij;
      half += (bounds.hi[i] - bounds.lo[i]) / Quad(2) * pij.abs();
    }
    lo[j] = (center - half).ceil().get_si();
    hi[j] = (center + half).floor().get_si();
    if (lo[j] > hi[j]) return;
    total *= static_cast<double>(hi[j] - lo[j] + 1);
  }
  if (total > static_cast<double>(budget))
    throw BudgetExceeded("group enumeration of " + std::to_string(static_cast<long long>(total)) +
                         " coefficient tuples exceeds the budget");
  std::vector<long> c = lo;
  QuadVec z(n, Quad(0));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < n; ++i) z[i] += Quad(lo[j]) * g.basis[j][i];
  while (true) {
    if (bounds.contains(z)) visit(z);
    std::size_t j = 0;
    while (j < r) {
      if (c[j] < hi[j]) {
        ++c[j];
        for (std::size_t i = 0; i < n; ++i) z[i] += g.basis[j][i];
        break;
      }
      const Quad span(hi[j] - lo[j]);
      for (std::size_t i = 0; i < n; ++i) z[i] -= span * g.basis[j][i];
      c[j] = lo[j];
      ++j;
    }
    if (j == r) break;
  }
}

QuadVec internal_part(const QuadVec& z, std::size_t d) { return QuadVec(z.begin() + static_cast<long>(d), z.end()); }
QuadVec physical_part(const QuadVec& z, std::size_t d) { return QuadVec(z.begin(), z.begin() + static_cast<long>(d)); }

bool in_window(const Scheme& s, const QuadVec& internal) {
  for (const auto& b : s.window)
    if (b.contains(internal)) return true;
  return false;
}

// Physical box large enough that every shifted point landing in `region`
// comes from a point of M inside it.
QuadBox shifted_bounds(const Box& region, const std::vector<QuadVec>& shifts) {
  QuadBox b{to_quad(region.lo), to_quad(region.hi)};
  for (std::size_t i = 0; i < region.dim(); ++i) {
    Quad smin = shifts[0][i], smax = shifts[0][i];
    for (const auto& s : shifts) {
      if (s[i] < smin) smin = s[i];
      if (s[i] > smax) smax = s[i];
    }
    b.lo[i] -= smax;
    b.hi[i] -= smin;
  }
  return b;
}

}  // namespace

std::vector<QuadVec> generate_exact(const Scheme& s, const Box& region, std::uint64_t budget) {
  s.validate();
  if (region.dim() != s.d) throw InputError("region dimension differs from d");
  const auto shifts = s.shift_set();
  const QuadBox target = QuadBox::from(region);
  std::vector<QuadVec> out;
  enumerate_group(s, shifted_bounds(region, shifts), budget, [&](const QuadVec& z) {
    if (!in_window(s, internal_part(z, s.d))) return;
    const QuadVec x = physical_part(z, s.d);
    for (const auto& sh : shifts) {
      QuadVec y = x;
      for (std::size_t i = 0; i < s.d; ++i) y[i] += sh[i];
      if (target.contains(y)) out.push_back(std::move(y));
    }
  });
  std::sort(out.begin(), out.end(), quad_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GeneratedPatch generate(const Scheme& s, const Box& region, const GenerateOptions& options) {
  s.validate();
  if (region.dim() != s.d) throw InputError("region dimension differs from d");
  GeneratedPatch out;
  out.radicand = s.radicand();
  if (out.radicand) out.sqrt_stand_in = sqrt_lower(out.radicand, options.precision);
  const Rational unit = ratio(Integer(1), options.precision);
  auto approx = [&](const Quad& x) { return out.radicand ? x.substitute(out.sqrt_stand_in) : x.a(); };
  auto err = [&](const Quad& x) -> Rational { return abs_of(x.b()) * unit; };

  const auto shifts = s.shift_set();
  std::vector<RatVec> pts;
  auto report = [&](const QuadVec& x, std::vector<RatVec>& into) {
    for (const auto& sh : shifts) {
      RatVec y(s.d);
      for (std::size_t i = 0; i < s.d; ++i) {
        const Quad v = x[i] + sh[i];
        y[i] = approx(v);
        const Rational e = err(v);
        if (e > out.error_bound) out.error_bound = e;
      }
      if (region.contains(y)) into.push_back(std::move(y));
    }
  };

  enumerate_group(s, shifted_bounds(region, shifts), options.budget, [&](const QuadVec& z) {
    const QuadVec internal = internal_part(z, s.d);
    const QuadVec x = physical_part(z, s.d);
    if (options.exact_window) {
      if (in_window(s, internal)) report(x, pts);
      return;
    }
    bool inside = false, maybe = false;
    for (const auto& b : s.window) {
      bool sure_in = true, sure_out = false;
      for (std::size_t i = 0; i < s.e; ++i) {
        const Rational v = approx(internal[i]), ev = err(internal[i]);
        const Rational lo = approx(b.lo[i]), elo = err(b.lo[i]);
        const Rational hi = approx(b.hi[i]), ehi = err(b.hi[i]);
        if (v + ev < lo - elo || v - ev > hi + ehi) sure_out = true;
        if (!(v - ev >= lo + elo && v + ev <= hi - ehi)) sure_in = false;
      }
      if (sure_in) inside = true;
      else if (!sure_out) maybe = true;
    }
    if (inside) report(x, pts);
    else if (maybe) report(x, out.ambiguous);
  });
  if (out.ambiguous.size() > options.max_ambiguous)
    throw PreconditionError(std::to_string(out.ambiguous.size()) +
                            " points lie within the certification error of the window boundary; raise the precision");
  sort_unique(out.ambiguous);
  out.patch = PointPatch(s.d, std::move(pts), region);
  return out;
}

ConditionReport check_conditions(const Scheme& s) {
  s.validate();
  ConditionReport rep;
  const std::size_t n = s.d + s.e;
  const GroupBasis g = group_basis(s.generators, n);
  rep.z_rank = g.z_rank;
  rep.r_rank = g.r_rank;
  rep.discrete = g.discrete();
  rep.lattice = rep.discrete && g.r_rank == n;

  const std::size_t r = g.basis.size();
  // Injectivity: integer relations among the physical parts.
  {
    Matrix<Rational> phys;
    for (const auto& b : g.basis) phys.push_back(rational_expansion(physical_part(b, s.d)));
    const IntMatrix ker = r ? integer_left_kernel(phys, 2 * s.d) : IntMatrix{};
    rep.injective = ker.empty();
    if (!ker.empty()) {
      QuadVec gamma(n, Quad(0));
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < n; ++i) gamma[i] += Quad(Rational(ker[0][j])) * g.basis[j][i];
      rep.kernel_witness = std::move(gamma);
    }
  }

  // Density of π2(Γ): fails iff some v has <v, π2(Γ)> inside Z.
  if (s.e == 0) {
    rep.dense = true;
    return rep;
  }
  Matrix<Quad> h;
  for (const auto& b : g.basis) h.push_back(internal_part(b, s.d));
  if (r == 0 || rank(h, s.e) < s.e) {
    rep.dense = false;
    Matrix<Quad> ker = r ? nullspace(h, s.e) : Matrix<Quad>{};
    if (r == 0) {
      QuadVec v(s.e, Quad(0));
      v[0] = 1;
      ker.push_back(v);
    }
    rep.dual_witness = ker.front();
    return rep;
  }
  // Rational vectors in the column space of h: annihilated by its left kernel.
  const Matrix<Quad> left = nullspace(transpose(h, s.e), r);
  Matrix<Rational> cond;
  for (const auto& y : left) {
    RatVec ra(r), rb(r);
    for (std::size_t i = 0; i < r; ++i) {
      ra[i] = y[i].a();
      rb[i] = y[i].b();
    }
    cond.push_back(std::move(ra));
    cond.push_back(std::move(rb));
  }
  Matrix<Rational> rational_c = cond.empty() ? Matrix<Rational>{} : nullspace(cond, r);
  if (cond.empty()) {
    for (std::size_t i = 0; i < r; ++i) {
      RatVec c(r, Rational(0));
      c[i] = 1;
      rational_c.push_back(std::move(c));
    }
  }
  if (rational_c.empty()) {
    rep.dense = true;
    return rep;
  }
  rep.dense = false;
  // Primitive integer c, then solve h v = c.
  RatVec c = rational_c.front();
  Integer l = common_denominator({c});
  std::vector<Integer> ci(r);
  Integer gcd_all = 0;
  for (std::size_t i = 0; i < r; ++i) {
    ci[i] = c[i].get_num() * (l / c[i].get_den());
    gcd_all = gcd(gcd_all, ci[i]);
  }
  QuadVec rhs(r);
  for (std::size_t i = 0; i < r; ++i) rhs[i] = Quad(ratio(ci[i], gcd_all));
  const auto v = solve(h, rhs, s.e);
  if (!v) throw CertificateFailure("dual vector for a rational relation could not be solved");
  rep.dual_witness = *v;
  return rep;
}

namespace {

Quad dot(const QuadVec& x, const QuadVec& y) {
  Quad s;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// Coordinates of the orthogonal projection onto span(w): (W W^T)^{-1} W.
Matrix<Quad> projection_coordinates(const Matrix<Quad>& w, std::size_t e) {
  if (w.empty()) return {};
  const Matrix<Quad> gram = multiply(w, transpose(w, e), e, w.size());
  const auto inv = inverse(gram);
  if (!inv) throw CertificateFailure("singular Gram matrix");
  return multiply(*inv, w, w.size(), e);
}

QuadVec apply_matrix(const Matrix<Quad>& m, const QuadVec& x) {
  QuadVec y(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) y[i] = dot(m[i], x);
  return y;
}

QuadBox image_bounds(const Matrix<Quad>& psi, const QuadBox& b) {
  QuadBox out;
  for (const auto& row : psi) {
    Quad c, h;
    for (std::size_t j = 0; j < row.size(); ++j) {
      c += (b.lo[j] + b.hi[j]) / Quad(2) * row[j];
      h += (b.hi[j] - b.lo[j]) / Quad(2) * row[j].abs();
    }
    out.lo.push_back(c - h);
    out.hi.push_back(c + h);
  }
  return out;
}

QuadBox translated(const QuadBox& b, const QuadVec& t, int sign) {
  QuadBox out = b;
  for (std::size_t i = 0; i < t.size(); ++i) {
    out.lo[i] += sign > 0 ? t[i] : -t[i];
    out.hi[i] += sign > 0 ? t[i] : -t[i];
  }
  return out;
}

std::vector<QuadBox> dedupe(std::vector<QuadBox> boxes) {
  std::vector<QuadBox> out;
  for (auto& b : boxes) {
    bool seen = false;
    for (const auto& o : out)
      if (o.lo == b.lo && o.hi == b.hi) seen = true;
    if (!seen) out.push_back(std::move(b));
  }
  return out;
}

// Scheme with internal space replaced by coordinates psi on U.
Scheme project_internal(const Scheme& s, const Matrix<Quad>& psi, const QuadMatrix& gens) {
  Scheme t;
  t.d = s.d;
  t.e = psi.size();
  for (const auto& g : gens) {
    QuadVec row = physical_part(g, s.d);
    const QuadVec in = apply_matrix(psi, internal_part(g, s.d));
    row.insert(row.end(), in.begin(), in.end());
    t.generators.push_back(std::move(row));
  }
  t.generators = group_basis(t.generators, t.d + t.e).basis;
  t.shifts = s.shifts;
  return t;
}

// <v, y> range over a box.
std::pair<Quad, Quad> functional_range(const QuadVec& v, const QuadBox& b) {
  Quad lo, hi;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Quad x = v[i] * b.lo[i], y = v[i] * b.hi[i];
    lo += x < y ? x : y;
    hi += x < y ? y : x;
  }
  return {lo, hi};
}

}  // namespace

bool verify_step_containment(const ReductionStep& step, const Rational& probe_radius, std::uint64_t budget,
                             std::size_t* probe_points) {
  const Box probe = Box::cube(step.before.d, probe_radius);
  const auto before = generate_exact(step.before, probe, budget);
  const auto after = generate_exact(step.after, probe, budget);
  if (probe_points) *probe_points = before.size();
  std::unordered_set<QuadVec, QuadVecHash> have(after.begin(), after.end());
  return std::all_of(before.begin(), before.end(), [&](const QuadVec& x) { return have.count(x) > 0; });
}

ReduceResult reduce(const Scheme& input, const ReduceOptions& options) {
  input.validate();
  ReduceResult out;
  Scheme s = input;
  s.generators = group_basis(s.generators, s.d + s.e).basis;

  if (options.check_density) {
    const Box probe = Box::cube(s.d, options.probe_radius);
    const GeneratedPatch gp = generate(s, probe, GenerateOptions{.budget = options.budget});
    if (gp.patch.empty()) throw PreconditionError("generated patch is empty on the probe region");
    const Box core = probe.inset(options.probe_radius / 4);
    out.probe_covering_radius = covering_radius(gp.patch, core);
    if (out.probe_covering_radius > options.probe_radius / 4)
      throw PreconditionError("generated patch is not relatively dense on the probe region (covering radius " +
                              to_string(out.probe_covering_radius) + ")");
  }

  while (true) {
    const ConditionReport rep = check_conditions(s);
    if (!rep.discrete) throw PreconditionError("the generated group is not discrete");
    out.final_report = rep;
    if (rep.all() || s.e == 0) break;

    ReductionStep step;
    step.before = s;
    const std::size_t n = s.d + s.e;
    if (!rep.lattice) {
      step.branch = Branch::NotLattice;
      step.v0_basis = nullspace(s.generators, n);
      Matrix<Quad> v;
      for (const auto& w : step.v0_basis) {
        for (std::size_t i = 0; i < s.d; ++i)
          if (!w[i].is_zero())
            throw PreconditionError(
                "the complement of span Γ is not orthogonal to R^d x {0}; the set is not relatively dense");
        v.push_back(internal_part(w, s.d));
      }
      step.u_basis = nullspace(v, s.e);
      const Matrix<Quad> psi = projection_coordinates(step.u_basis, s.e);
      step.after = project_internal(s, psi, s.generators);
      for (const auto& b : s.window) step.after.window.push_back(image_bounds(psi, b));
      step.after.window = dedupe(step.after.window);
    } else if (!rep.injective) {
      step.branch = Branch::NotInjective;
      step.gamma = *rep.kernel_witness;
      const QuadVec w = internal_part(step.gamma, s.d);
      step.u_basis = nullspace(Matrix<Quad>{w}, s.e);
      const Matrix<Quad> psi = projection_coordinates(step.u_basis, s.e);
      step.after = project_internal(s, psi, s.generators);
      for (const auto& b : s.window) step.after.window.push_back(image_bounds(psi, b));
      step.after.window = dedupe(step.after.window);
    } else {
      step.branch = Branch::NotDense;
      step.v = *rep.dual_witness;
      const std::size_t r = s.generators.size();
      std::vector<Integer> c(r);
      for (std::size_t j = 0; j < r; ++j) {
        const Quad x = dot(step.v, internal_part(s.generators[j], s.d));
        if (!x.is_rational() || x.a().get_den() != 1) throw CertificateFailure("dual vector is not integral on Γ");
        c[j] = x.a().get_num();
      }
      const IntegerSplit split = split_functional(c);
      if (split.gcd != 1) throw CertificateFailure("dual vector does not map Γ onto Z");
      step.gamma.assign(n, Quad(0));
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < n; ++i) step.gamma[i] += Quad(Rational(split.unit[j])) * s.generators[j][i];
      QuadMatrix sub_gens;
      for (const auto& k : split.kernel) {
        QuadVec g(n, Quad(0));
        for (std::size_t j = 0; j < r; ++j)
          for (std::size_t i = 0; i < n; ++i) g[i] += Quad(Rational(k[j])) * s.generators[j][i];
        sub_gens.push_back(std::move(g));
      }
      step.u_basis = nullspace(Matrix<Quad>{step.v}, s.e);
      const Matrix<Quad> psi = projection_coordinates(step.u_basis, s.e);
      step.after = project_internal(s, psi, sub_gens);

      Quad top;
      for (const auto& b : s.window) {
        const auto [lo, hi] = functional_range(step.v, b);
        if (lo.abs() > top) top = lo.abs();
        if (hi.abs() > top) top = hi.abs();
      }
      step.n_max = top.floor().get_si();
      const QuadVec g2 = internal_part(step.gamma, s.d), g1 = physical_part(step.gamma, s.d);
      for (long k = -step.n_max; k <= step.n_max; ++k) {
        bool used = false;
        for (const auto& b : s.window) {
          const auto [lo, hi] = functional_range(step.v, b);
          if (Quad(k) < lo || Quad(k) > hi) continue;
          QuadVec off = g2;
          for (auto& x : off) x *= Quad(k);
          step.after.window.push_back(image_bounds(psi, translated(b, off, -1)));
          used = true;
        }
        if (used) {
          step.slices.push_back(k);
          QuadVec e = g1;
          for (auto& x : e) x *= Quad(k);
          step.e_shifts.push_back(std::move(e));
        }
      }
      if (step.slices.empty()) throw PreconditionError("window misses every slice; the set is empty");
      step.after.window = dedupe(step.after.window);
      std::vector<QuadVec> shifts;
      for (const auto& a : s.shift_set())
        for (const auto& e : step.e_shifts) {
          QuadVec t = a;
          for (std::size_t i = 0; i < s.d; ++i) t[i] += e[i];
          shifts.push_back(std::move(t));
        }
      std::sort(shifts.begin(), shifts.end(), quad_less);
      shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
      step.after.shifts = std::move(shifts);
    }
    if (step.after.e >= s.e) throw CertificateFailure("reduction step did not lower e");
    if (step.after.window.empty()) step.after.window.push_back(QuadBox{});
    step.after.validate();
    if (options.verify) {
      step.containment_checked = true;
      step.containment_ok =
          verify_step_containment(step, options.probe_radius, options.budget, &step.probe_points);
      if (!step.containment_ok)
        throw CertificateFailure("containment certificate failed for branch " + to_string(step.branch));
    }
    s = step.after;
    out.steps.push_back(std::move(step));
  }
  out.scheme = s;
  return out;
}

}  // namespace meyer
