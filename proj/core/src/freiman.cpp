#include "meyer/freiman.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "meyer/errors.hpp"

namespace meyer {

namespace {

struct BudgetHit {};

template <class Int>
struct IntTraits;

template <>
struct IntTraits<std::int64_t> {
  static std::int64_t from(const Integer& z) { return z.get_si(); }
  static Integer to(std::int64_t v) { return Integer(static_cast<long>(v)); }
  static std::size_t hash(std::int64_t v) {
    auto x = static_cast<std::uint64_t>(v) * 0x9e3779b97f4a7c15ULL;
    return static_cast<std::size_t>(x ^ (x >> 29));
  }
  static std::int64_t abs(std::int64_t v) { return v < 0 ? -v : v; }
};

template <>
struct IntTraits<Integer> {
  static Integer from(const Integer& z) { return z; }
  static Integer to(const Integer& v) { return v; }
  static std::size_t hash(const Integer& v) { return hash_integer(v); }
  static Integer abs(const Integer& v) { return ::abs(v); }
};

template <class Int>
using IVec = std::vector<Int>;

template <class Int>
struct IVecHash {
  std::size_t operator()(const IVec<Int>& v) const {
    std::size_t h = v.size();
    for (const auto& x : v) h = h * 1000003 ^ IntTraits<Int>::hash(x);
    return h;
  }
};

template <class Int>
IVec<Int> isub(const IVec<Int>& a, const IVec<Int>& b) {
  IVec<Int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <class Int>
bool positive_half(const IVec<Int>& v) {
  for (const auto& x : v) {
    if (x > 0) return true;
    if (x < 0) return false;
  }
  return false;
}

template <class Int>
struct Candidate {
  std::vector<std::size_t> step_idx;
  std::vector<long> lengths;
  std::vector<std::size_t> f_idx;
};

template <class Int>
class CoverSearch {
 public:
  CoverSearch(std::vector<IVec<Int>> a, const CoverOptions& opt, CoverStats& stats)
      : a_(std::move(a)), opt_(opt), stats_(stats), dim_(a_.front().size()) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_index_.emplace(a_[i], i);
    // Translates near the origin are preferred on ties.
    by_norm_.resize(a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i) by_norm_[i] = i;
    auto norm = [&](std::size_t i) {
      Int m = 0;
      for (const auto& x : a_[i]) m = std::max<Int>(m, IntTraits<Int>::abs(x));
      return m;
    };
    std::stable_sort(by_norm_.begin(), by_norm_.end(), [&](std::size_t x, std::size_t y) { return norm(x) < norm(y); });
  }

  std::optional<Candidate<Int>> run() {
    build_difference_set();
    stats_.ranks_tried = 1;
    best_f_ = a_.size();
    for (std::size_t rank = 1; rank <= opt_.max_rank; ++rank) {
      stats_.ranks_tried = rank + 1;
      const std::size_t pool = rank == 1 ? steps_.size() : std::min(opt_.pool, steps_.size());
      if (pool < rank) break;
      std::vector<std::size_t> idx(rank);
      for (std::size_t i = 0; i < rank; ++i) idx[i] = i;
      while (true) {
        if (auto c = evaluate(idx); c && c->f_idx.size() <= opt_.max_f) return c;
        // Next combination in lexicographic order.
        std::size_t i = rank;
        while (i > 0 && idx[i - 1] == pool - rank + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < rank; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    // Q = {0} with F = A only as a last resort.
    if (a_.size() <= opt_.max_f) return Candidate<Int>{{}, {}, all_indices()};
    return std::nullopt;
  }

  const std::vector<IVec<Int>>& steps() const { return steps_; }
  const std::optional<Candidate<Int>>& best_partial() const { return best_partial_; }

 private:
  void spend(std::uint64_t n) {
    stats_.lookups += n;
    if (stats_.lookups > opt_.budget) {
      stats_.budget_exhausted = true;
      throw BudgetHit{};
    }
  }

  std::vector<std::size_t> all_indices() const {
    std::vector<std::size_t> v(a_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
  }

  void build_difference_set() {
    std::unordered_set<IVec<Int>, IVecHash<Int>> diff;
    for (const auto& x : a_)
      for (const auto& y : a_) diff.insert(isub(x, y));
    spend(a_.size() * a_.size());
    std::vector<IVec<Int>> dv(diff.begin(), diff.end());
    spend(dv.size() * dv.size());
    for (const auto& x : dv)
      for (const auto& y : dv) {
        IVec<Int> s(dim_);
        for (std::size_t j = 0; j < dim_; ++j) s[j] = x[j] + y[j];
        d_.insert(std::move(s));
      }
    for (const auto& v : d_)
      if (positive_half(v)) steps_.push_back(v);
    auto norm = [](const IVec<Int>& v) {
      Int m = 0;
      for (const auto& x : v)
        if (IntTraits<Int>::abs(x) > m) m = IntTraits<Int>::abs(x);
      return m;
    };
    std::sort(steps_.begin(), steps_.end(), [&](const IVec<Int>& x, const IVec<Int>& y) {
      const Int nx = norm(x), ny = norm(y);
      if (nx != ny) return nx < ny;
      return x < y;
    });
  }

  // Grows lengths round-robin while Q stays proper and inside 2A-2A, then
  // extracts a translate family. Returns nullopt for degenerate tuples.
  std::optional<Candidate<Int>> evaluate(const std::vector<std::size_t>& idx) {
    ++stats_.candidates;
    spend(1);
    const std::size_t r = idx.size();
    std::vector<const IVec<Int>*> s(r);
    for (std::size_t i = 0; i < r; ++i) s[i] = &steps_[idx[i]];

    std::unordered_map<IVec<Int>, std::vector<long>, IVecHash<Int>> qmap;
    qmap.emplace(IVec<Int>(dim_, Int(0)), std::vector<long>(r, 0));
    std::vector<long> len(r, 0);
    std::vector<bool> frozen(r, false);
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t i = 0; i < r; ++i) {
        if (frozen[i]) continue;
        if (grow(s, len, i, qmap)) {
          ++len[i];
          progress = true;
        } else {
          frozen[i] = true;
        }
      }
    }
    for (long l : len)
      if (l == 0) return std::nullopt;

    const std::size_t qsize = qmap.size();
    const std::size_t n = a_.size();
    // Each translate covers at most |Q| points.
    if (n > opt_.max_f * qsize && n > best_f_ * qsize) return std::nullopt;

    std::vector<long> rr(r);
    for (std::size_t i = 0; i < r; ++i) rr[i] = 2 * (len[i] / 2);
    auto in_rr = [&](const std::vector<long>& c) {
      for (std::size_t i = 0; i < r; ++i)
        if (std::labs(c[i]) > rr[i]) return false;
      return true;
    };

    std::vector<std::vector<std::size_t>> covers(n);    // covers[f] = x with x - f in Q
    std::vector<std::vector<std::size_t>> conflict(n);  // x - f in R - R
    if (qsize < n) {
      spend(n * qsize);
      for (std::size_t xi = 0; xi < n; ++xi)
        for (const auto& [q, c] : qmap) {
          auto it = a_index_.find(isub(a_[xi], q));
          if (it == a_index_.end()) continue;
          covers[it->second].push_back(xi);
          if (in_rr(c)) conflict[xi].push_back(it->second);
        }
    } else {
      spend(n * n);
      for (std::size_t xi = 0; xi < n; ++xi)
        for (std::size_t fi = 0; fi < n; ++fi) {
          auto it = qmap.find(isub(a_[xi], a_[fi]));
          if (it == qmap.end()) continue;
          covers[fi].push_back(xi);
          if (in_rr(it->second)) conflict[xi].push_back(fi);
        }
    }

    // Maximal family of disjoint translates x + R, R the halved GAP.
    std::vector<std::size_t> disjoint;
    std::vector<char> in_f(n, 0);
    for (std::size_t xi : by_norm_) {
      bool clash = false;
      for (std::size_t fi : conflict[xi])
        if (in_f[fi]) {
          clash = true;
          break;
        }
      if (!clash) {
        disjoint.push_back(xi);
        in_f[xi] = 1;
      }
    }

    // Greedy set cover, stopped once it cannot beat the disjoint family.
    std::vector<std::size_t> greedy;
    std::vector<char> covered(n, 0);
    std::size_t remaining = n;
    while (remaining > 0 && greedy.size() < disjoint.size()) {
      std::size_t best = n, gain = 0;
      for (std::size_t fi : by_norm_) {
        std::size_t g = 0;
        for (std::size_t xi : covers[fi]) g += !covered[xi];
        if (g > gain) {
          gain = g;
          best = fi;
        }
      }
      greedy.push_back(best);
      for (std::size_t xi : covers[best])
        if (!covered[xi]) {
          covered[xi] = 1;
          --remaining;
        }
    }
    std::vector<std::size_t> chosen = remaining == 0 && greedy.size() < disjoint.size() ? greedy : disjoint;
    std::sort(chosen.begin(), chosen.end());

    Candidate<Int> c{idx, len, chosen};
    if (chosen.size() < best_f_) {
      best_f_ = chosen.size();
      stats_.best_f = best_f_;
      best_partial_ = c;
    }
    return c;
  }

  // Adds the layer |n_i| = len[i] + 1 if it keeps Q proper and inside D.
  bool grow(const std::vector<const IVec<Int>*>& s, const std::vector<long>& len, std::size_t i,
            std::unordered_map<IVec<Int>, std::vector<long>, IVecHash<Int>>& qmap) {
    const std::size_t r = s.size();
    std::vector<std::pair<IVec<Int>, std::vector<long>>> layer;
    std::unordered_set<IVec<Int>, IVecHash<Int>> fresh;
    std::vector<long> c(r);
    for (std::size_t j = 0; j < r; ++j) c[j] = -len[j];
    for (const long sign : {-1L, 1L}) {
      for (std::size_t j = 0; j < r; ++j) c[j] = -len[j];
      c[i] = sign * (len[i] + 1);
      while (true) {
        IVec<Int> p(dim_, Int(0));
        for (std::size_t j = 0; j < r; ++j)
          if (c[j] != 0)
            for (std::size_t k = 0; k < dim_; ++k) p[k] += Int(c[j]) * (*s[j])[k];
        spend(1);
        if (!d_.count(p) || qmap.count(p) || !fresh.insert(p).second) return false;
        layer.emplace_back(std::move(p), c);
        std::size_t j = 0;
        while (j < r) {
          if (j == i) {
            ++j;
            continue;
          }
          if (c[j] < len[j]) {
            ++c[j];
            break;
          }
          c[j] = -len[j];
          ++j;
        }
        if (j == r) break;
      }
    }
    for (auto& [p, coeff] : layer) qmap.emplace(std::move(p), std::move(coeff));
    return true;
  }

  std::vector<IVec<Int>> a_;
  const CoverOptions& opt_;
  CoverStats& stats_;
  std::size_t dim_;
  std::unordered_map<IVec<Int>, std::size_t, IVecHash<Int>> a_index_;
  std::unordered_set<IVec<Int>, IVecHash<Int>> d_;
  std::vector<IVec<Int>> steps_;
  std::size_t best_f_ = 0;
  std::vector<std::size_t> by_norm_;
  std::optional<Candidate<Int>> best_partial_;
};

template <class Int>
void run_search(const FiniteSet& a, const Integer& scale_by, const CoverOptions& opt, CoverResult& out) {
  std::vector<IVec<Int>> pts;
  pts.reserve(a.size());
  for (const auto& x : a) {
    IVec<Int> p(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      const Rational v = x[j] * scale_by;
      p[j] = IntTraits<Int>::from(v.get_num());
    }
    pts.push_back(std::move(p));
  }
  CoverSearch<Int> search(pts, opt, out.stats);
  std::optional<Candidate<Int>> found;
  try {
    found = search.run();
  } catch (const BudgetHit&) {
  }
  const Candidate<Int>* pick = found ? &*found : (search.best_partial() ? &*search.best_partial() : nullptr);
  const std::size_t d = a.dim();
  if (!pick) {
    // Rank-0 fallback: F = A.
    out.q = Gap::point(zero_vec(d));
    out.f = a;
    return;
  }
  std::vector<RatVec> steps;
  for (std::size_t i : pick->step_idx) {
    RatVec v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = ratio(IntTraits<Int>::to(search.steps()[i][j]), scale_by);
    steps.push_back(std::move(v));
  }
  out.q = Gap(std::move(steps), pick->lengths, zero_vec(d), true);
  std::vector<RatVec> f;
  for (std::size_t i : pick->f_idx) f.push_back(a[i]);
  out.f = FiniteSet(d, std::move(f));
  out.success = found.has_value();
}

}  // namespace

CoverResult find_cover(const FiniteSet& a, const CoverOptions& options) {
  if (a.empty()) throw PreconditionError("cover search needs a nonempty set");
  if (options.max_f == 0) throw InputError("max_f must be at least 1");
  CoverResult out;
  out.f = FiniteSet(a.dim());
  out.q = Gap::point(zero_vec(a.dim()));
  out.doubling = doubling_constant(a, negate(a));
  out.dilation = common_denominator(a.elements());

  // Coordinates of 2A-2A stay below 4 max|x|; use machine integers when safe.
  Integer bound = 0;
  for (const auto& x : a)
    for (const auto& v : x) {
      const Integer z = ::abs(Integer(v.get_num() * (out.dilation / v.get_den())));
      if (z > bound) bound = z;
    }
  const bool fits = bound < (Integer(1) << 56);
  if (fits)
    run_search<std::int64_t>(a, out.dilation, options, out);
  else
    run_search<Integer>(a, out.dilation, options, out);

  // Certificates are recomputed independently of the search bookkeeping.
  try {
    const FiniteSet q = enumerate(out.q, options.budget);
    const FiniteSet d2 = iterated(a, 2, 2).set;
    out.cert_q_in_2a2a = q.is_subset_of(d2) && Integer(q.size()) == out.q.size();
    std::unordered_set<RatVec, RatVecHash> qs(q.begin(), q.end());
    out.cert_a_in_fq = std::all_of(a.begin(), a.end(), [&](const RatVec& x) {
      return std::any_of(out.f.begin(), out.f.end(), [&](const RatVec& f) { return qs.count(sub(x, f)) > 0; });
    });
    out.size_ratio = ratio(Integer(q.size()), Integer(a.size()));
  } catch (const BudgetExceeded&) {
    out.stats.budget_exhausted = true;
    out.cert_q_in_2a2a = out.cert_a_in_fq = false;
  }
  out.success = out.success && out.cert_q_in_2a2a && out.cert_a_in_fq && out.q.rank() <= options.max_rank &&
                out.f.size() <= options.max_f;
  return out;
}

bool verify_cover(const FiniteSet& a, const CoverResult& r, std::uint64_t budget) {
  if (!r.q.symmetric() && r.q.rank() > 0) return false;
  if (r.q.dim() != a.dim()) return false;
  const FiniteSet q = enumerate(r.q, budget);
  if (Integer(q.size()) != r.q.size()) return false;
  if (!q.is_subset_of(iterated(a, 2, 2).set)) return false;
  std::unordered_set<RatVec, RatVecHash> qs(q.begin(), q.end());
  for (const auto& x : a) {
    bool hit = false;
    for (const auto& f : r.f)
      if (qs.count(sub(x, f))) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

Rational asymmetric_to_symmetric(const Rational& k) {
  if (k < 1) throw InputError("doubling constant below 1");
  return k * k;
}

}  // namespace meyer
