#include "meyer/sumsets.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

#include "meyer/errors.hpp"

namespace meyer {

namespace {

// Above this |A||B| the hashing backend is used by default.
constexpr std::size_t kMergeLimit = 1u << 14;

void check_dims(const FiniteSet& a, const FiniteSet& b) {
  if (a.dim() != b.dim())
    throw InputError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

// k-way merge of the sorted rows a_i + B.
std::vector<RatVec> merge_sum(const FiniteSet& a, const FiniteSet& b) {
  struct Head {
    RatVec value;
    std::size_t row;
    std::size_t col;
  };
  auto greater = [](const Head& x, const Head& y) { return lex_compare(x.value, y.value) > 0; };
  std::priority_queue<Head, std::vector<Head>, decltype(greater)> heap(greater);
  for (std::size_t i = 0; i < a.size(); ++i) heap.push({add(a[i], b[0]), i, 0});

  std::vector<RatVec> out;
  while (!heap.empty()) {
    Head h = heap.top();
    heap.pop();
    if (out.empty() || lex_compare(out.back(), h.value) != 0) out.push_back(h.value);
    if (h.col + 1 < b.size()) heap.push({add(a[h.row], b[h.col + 1]), h.row, h.col + 1});
  }
  return out;
}

std::vector<RatVec> hash_sum(const FiniteSet& a, const FiniteSet& b) {
  std::unordered_set<RatVec, RatVecHash> seen;
  seen.reserve(a.size() * 4);
  for (const auto& x : a)
    for (const auto& y : b) seen.insert(add(x, y));
  std::vector<RatVec> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), LexLess{});
  return out;
}

}  // namespace

FiniteSet::FiniteSet(std::size_t dim, std::vector<RatVec> elements) : dim_(dim), elements_(std::move(elements)) {
  for (const auto& e : elements_)
    if (e.size() != dim_)
      throw InputError("element of dimension " + std::to_string(e.size()) + " in a set of dimension " +
                       std::to_string(dim_));
  sort_unique(elements_);
}

FiniteSet FiniteSet::of_integers(const std::vector<long>& values) {
  std::vector<RatVec> pts;
  pts.reserve(values.size());
  for (long v : values) pts.push_back({Rational(v)});
  return FiniteSet(1, std::move(pts));
}

bool FiniteSet::contains(const RatVec& x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x, LexLess{});
}

bool FiniteSet::is_subset_of(const FiniteSet& other) const {
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end(), LexLess{});
}

FiniteSet sum(const FiniteSet& a, const FiniteSet& b, SumBackend backend) {
  check_dims(a, b);
  if (a.empty() || b.empty()) return FiniteSet(a.dim());
  if (backend == SumBackend::Auto)
    backend = a.size() * b.size() <= kMergeLimit ? SumBackend::SortedMerge : SumBackend::Hashing;
  auto pts = backend == SumBackend::SortedMerge ? merge_sum(a, b) : hash_sum(a, b);
  return FiniteSet(a.dim(), std::move(pts));
}

FiniteSet negate(const FiniteSet& a) {
  std::vector<RatVec> pts;
  pts.reserve(a.size());
  for (const auto& x : a) pts.push_back(neg(x));
  return FiniteSet(a.dim(), std::move(pts));
}

FiniteSet translate(const FiniteSet& a, const RatVec& t) {
  std::vector<RatVec> pts;
  pts.reserve(a.size());
  for (const auto& x : a) pts.push_back(add(x, t));
  return FiniteSet(a.dim(), std::move(pts));
}

FiniteSet difference(const FiniteSet& a, const FiniteSet& b, SumBackend backend) {
  check_dims(a, b);
  return sum(a, negate(b), backend);
}

IteratedSet iterated(const FiniteSet& a, unsigned k, unsigned l) {
  IteratedSet out{FiniteSet::zero(a.dim()), k == 0 && l == 0};
  if (out.zero_fold) return out;
  if (a.empty()) return {FiniteSet(a.dim()), false};
  // Repeated doubling keeps the number of large sums logarithmic.
  auto fold = [](const FiniteSet& base, unsigned times) {
    FiniteSet acc = FiniteSet::zero(base.dim());
    FiniteSet power = base;
    while (times > 0) {
      if (times & 1u) acc = sum(acc, power);
      times >>= 1u;
      if (times > 0) power = sum(power, power);
    }
    return acc;
  };
  out.set = difference(fold(a, k), fold(a, l));
  return out;
}

Rational doubling_constant(const FiniteSet& a, const FiniteSet& b) {
  if (a.empty()) throw PreconditionError("doubling constant of an empty set");
  return ratio(Integer(sum(a, b).size()), Integer(a.size()));
}

PlunneckeReport verify_plunnecke(const FiniteSet& a, const FiniteSet& b, unsigned k, unsigned l) {
  if (a.empty()) throw PreconditionError("Pluennecke check needs a nonempty A");
  check_dims(a, b);
  PlunneckeReport r;
  r.k_constant = doubling_constant(a, b);
  r.lhs = Integer(iterated(b, k, l).set.size());
  Rational power = 1;
  for (unsigned i = 0; i < k + l; ++i) power *= r.k_constant;
  r.rhs = power * Rational(Integer(a.size()));
  r.holds = Rational(r.lhs) <= r.rhs;
  return r;
}

RuzsaReport verify_ruzsa_triangle(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c) {
  if (a.empty() || b.empty() || c.empty()) throw PreconditionError("Ruzsa triangle check needs nonempty sets");
  check_dims(a, b);
  check_dims(a, c);
  RuzsaReport r;
  r.lhs = Integer(a.size()) * Integer(difference(b, c).size());
  r.rhs = Integer(difference(a, b).size()) * Integer(difference(a, c).size());
  r.holds = r.lhs <= r.rhs;
  return r;
}

}  // namespace meyer
