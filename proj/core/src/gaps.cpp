#include "meyer/gaps.hpp"

#include <algorithm>
#include <unordered_set>

#include "meyer/errors.hpp"

namespace meyer {

Gap::Gap(std::vector<RatVec> steps, std::vector<long> lengths, RatVec base, bool symmetric)
    : steps_(std::move(steps)), lengths_(std::move(lengths)), base_(std::move(base)), symmetric_(symmetric) {
  if (steps_.size() != lengths_.size()) throw InputError("GAP needs one length per step");
  for (const auto& s : steps_)
    if (s.size() != base_.size()) throw InputError("GAP step dimension differs from base dimension");
  for (long l : lengths_)
    if (l < 0) throw InputError("GAP lengths must be nonnegative");
  if (symmetric_ && !is_zero(base_)) throw InputError("a symmetric GAP has base 0");
}

Integer Gap::size() const {
  Integer s = 1;
  for (long l : lengths_) s *= symmetric_ ? 2 * l + 1 : l + 1;
  return s;
}

RatVec Gap::point_at(const std::vector<long>& coefficients) const {
  RatVec p = base_;
  for (std::size_t i = 0; i < steps_.size(); ++i)
    if (coefficients[i] != 0)
      for (std::size_t j = 0; j < p.size(); ++j) p[j] += coefficients[i] * steps_[i][j];
  return p;
}

Gap Gap::dilated(long k) const {
  std::vector<long> ls = lengths_;
  for (long& l : ls) l *= k;
  return Gap(steps_, std::move(ls), base_, symmetric_);
}

namespace {

void check_budget(const Gap& g, std::uint64_t budget) {
  if (g.size() > Integer(static_cast<unsigned long>(budget)))
    throw BudgetExceeded("GAP of nominal size " + g.size().get_str() + " exceeds the enumeration budget " +
                         std::to_string(budget));
}

// Calls visit(point) for every coefficient tuple; stops when visit is false.
template <class Visit>
void for_each_point(const Gap& g, Visit&& visit) {
  const std::size_t r = g.rank();
  std::vector<long> n(r);
  for (std::size_t i = 0; i < r; ++i) n[i] = g.min_coefficient(i);
  RatVec p = g.point_at(n);
  while (true) {
    if (!visit(p)) return;
    std::size_t i = 0;
    while (i < r) {
      if (n[i] < g.max_coefficient(i)) {
        ++n[i];
        p = add(p, g.steps()[i]);
        break;
      }
      // Wrap coordinate i back to its minimum.
      const long span = n[i] - g.min_coefficient(i);
      if (span != 0) p = sub(p, scale(g.steps()[i], Rational(span)));
      n[i] = g.min_coefficient(i);
      ++i;
    }
    if (i == r) return;
  }
}

}  // namespace

FiniteSet enumerate(const Gap& g, std::uint64_t budget) {
  check_budget(g, budget);
  std::vector<RatVec> pts;
  pts.reserve(g.size().get_ui());
  for_each_point(g, [&](const RatVec& p) {
    pts.push_back(p);
    return true;
  });
  return FiniteSet(g.dim(), std::move(pts));
}

bool is_proper(const Gap& g, std::uint64_t budget) {
  check_budget(g, budget);
  std::unordered_set<RatVec, RatVecHash> seen;
  seen.reserve(g.size().get_ui());
  bool proper = true;
  for_each_point(g, [&](const RatVec& p) {
    proper = seen.insert(p).second;
    return proper;
  });
  return proper;
}

DoublingReport doubling_check(const Gap& g, std::uint64_t budget) {
  DoublingReport r;
  const FiniteSet p = enumerate(g, budget);
  r.proper = Integer(p.size()) == g.size();
  r.sumset_size = Integer(sum(p, p).size());
  const Integer factor = Integer(1) << static_cast<mp_bitcnt_t>(g.rank());
  r.bound = factor * (r.proper ? Integer(p.size()) : g.size());
  r.holds = r.sumset_size <= r.bound;
  return r;
}

HalveResult halve(const Gap& g) {
  HalveResult out{g, false};
  std::vector<long> ls = g.lengths();
  for (long& l : ls) {
    if (l % 2 != 0) {
      ++l;
      out.padded = true;
    }
    l /= 2;
  }
  out.gap = Gap(g.steps(), std::move(ls), g.base(), g.symmetric());
  return out;
}

std::optional<std::vector<long>> membership(const Gap& g, const RatVec& x, std::uint64_t budget) {
  if (x.size() != g.dim()) throw InputError("membership query of the wrong dimension");
  CoefficientSearch search;
  search.vectors = g.steps();
  for (std::size_t i = 0; i < g.rank(); ++i) {
    search.lo.push_back(g.min_coefficient(i));
    search.hi.push_back(g.max_coefficient(i));
  }
  search.target = sub(x, g.base());
  search.budget = budget;
  std::optional<std::vector<long>> found;
  search.run([&](const std::vector<long>& n, const RatVec&) {
    found = n;
    return false;
  });
  return found;
}

namespace {

struct SearchState {
  const CoefficientSearch& s;
  std::vector<std::vector<Rational>> slack;  // slack[level][axis]
  std::vector<long> n;
  std::uint64_t explored = 0;
  bool stopped = false;
  const CoefficientSearch::Visitor& visit;

  // Feasible range of n_level given the partial sum and the slack of the
  // remaining coefficients. Returns false when empty.
  bool range(std::size_t level, const RatVec& partial, long& lo, long& hi) const {
    lo = s.lo[level];
    hi = s.hi[level];
    const RatVec& v = s.vectors[level];
    for (std::size_t j = 0; j < partial.size(); ++j) {
      const Rational rem = s.target[j] - partial[j];
      const Rational tol = s.radius + slack[level][j];
      if (sgn(v[j]) == 0) {
        if (abs_of(rem) > tol) return false;
        continue;
      }
      Rational a = (rem - tol) / v[j];
      Rational b = (rem + tol) / v[j];
      if (a > b) std::swap(a, b);
      const Integer ca = ceil_of(a), fb = floor_of(b);
      if (fb < lo || ca > hi) return false;
      if (ca > lo) lo = ca.get_si();
      if (fb < hi) hi = fb.get_si();
      if (lo > hi) return false;
    }
    return true;
  }

  void descend(std::size_t level, const RatVec& partial) {
    if (stopped) return;
    const std::size_t r = s.vectors.size();
    if (level == r) {
      if (sup_dist(partial, s.target) <= s.radius && !visit(n, partial)) stopped = true;
      return;
    }
    long lo, hi;
    if (!range(level, partial, lo, hi)) return;
    for (long k = lo; k <= hi && !stopped; ++k) {
      if (++explored > s.budget)
        throw BudgetExceeded("coefficient search exceeded its budget of " + std::to_string(s.budget));
      n[level] = k;
      RatVec next = partial;
      if (k != 0)
        for (std::size_t j = 0; j < next.size(); ++j) next[j] += k * s.vectors[level][j];
      descend(level + 1, next);
    }
    n[level] = 0;
  }
};

}  // namespace

std::uint64_t CoefficientSearch::run(const Visitor& visit) const {
  const std::size_t r = vectors.size();
  if (lo.size() != r || hi.size() != r) throw InputError("coefficient search bounds do not match the vectors");
  const std::size_t d = target.size();
  SearchState st{*this, std::vector<std::vector<Rational>>(r, std::vector<Rational>(d, Rational(0))),
                 std::vector<long>(r, 0), 0, false, visit};
  for (std::size_t level = r; level-- > 1;) {
    const long m = std::max(std::labs(lo[level]), std::labs(hi[level]));
    for (std::size_t j = 0; j < d; ++j) st.slack[level - 1][j] = st.slack[level][j] + m * abs_of(vectors[level][j]);
  }
  for (std::size_t i = 0; i < r; ++i)
    if (lo[i] > hi[i]) return 0;
  st.descend(0, zero_vec(d));
  return st.explored;
}

}  // namespace meyer
