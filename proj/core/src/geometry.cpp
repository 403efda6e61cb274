#include "meyer/geometry.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "meyer/errors.hpp"

namespace meyer {

PointPatch::PointPatch(std::size_t dim, std::vector<RatVec> points, Box region)
    : dim_(dim), points_(std::move(points)), region_(std::move(region)) {
  if (dim_ == 0) throw InputError("patch dimension must be positive");
  if (region_.dim() != dim_) throw InputError("region dimension does not match patch dimension");
  for (std::size_t i = 0; i < dim_; ++i)
    if (region_.lo[i] > region_.hi[i]) throw InputError("region has lo > hi on axis " + std::to_string(i));
  for (const auto& p : points_) {
    if (p.size() != dim_) throw InputError("point " + to_string(p) + " has the wrong dimension");
    if (!region_.contains(p)) throw InputError("point " + to_string(p) + " lies outside the region");
  }
  sort_unique(points_);
}

PointPatch PointPatch::restricted(const Box& box) const {
  std::vector<RatVec> kept;
  for (const auto& p : points_)
    if (box.contains(p)) kept.push_back(p);
  return PointPatch(dim_, std::move(kept), box);
}

PointPatch PointPatch::scaled(const Rational& factor) const {
  if (factor <= 0) throw InputError("scale factor must be positive");
  std::vector<RatVec> pts;
  pts.reserve(points_.size());
  for (const auto& p : points_) pts.push_back(scale(p, factor));
  return PointPatch(dim_, std::move(pts), Box{scale(region_.lo, factor), scale(region_.hi, factor)});
}

Rational discreteness_radius(const std::vector<RatVec>& points) {
  if (points.size() < 2) throw PreconditionError("degenerate patch: fewer than two points");
  std::vector<RatVec> sorted = points;
  sort_unique(sorted);
  if (sorted.size() < 2) throw PreconditionError("degenerate patch: fewer than two distinct points");
  Rational best = sup_dist(sorted[0], sorted[1]);
  // Sorted by the first coordinate, so the inner scan can stop once that
  // coordinate alone exceeds the current best.
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[j][0] - sorted[i][0] >= best) break;
      const Rational d = sup_dist(sorted[i], sorted[j]);
      if (d < best) best = d;
    }
  }
  return best;
}

Rational discreteness_radius(const PointPatch& patch) { return discreteness_radius(patch.points()); }

std::optional<std::pair<RatVec, RatVec>> discreteness_violation(const std::vector<RatVec>& points, const Rational& r) {
  std::vector<RatVec> sorted = points;
  sort_unique(sorted);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[j][0] - sorted[i][0] >= r) break;
      if (sup_dist(sorted[i], sorted[j]) < r) return std::make_pair(sorted[i], sorted[j]);
    }
  }
  return std::nullopt;
}

namespace {

// Points sorted by first coordinate with a query for "any point within t".
class SupIndex {
 public:
  explicit SupIndex(const std::vector<RatVec>& pts) : pts_(pts) {}

  bool any_within(const RatVec& x, const Rational& t) const {
    const Rational lo = x[0] - t;
    auto it = std::lower_bound(pts_.begin(), pts_.end(), lo,
                               [](const RatVec& p, const Rational& v) { return p[0] < v; });
    const Rational hi = x[0] + t;
    for (; it != pts_.end() && (*it)[0] <= hi; ++it)
      if (sup_dist(*it, x) <= t) return true;
    return false;
  }

  std::size_t count_in(const RatVec& center, const Rational& r, BallKind kind) const {
    const Rational lo = center[0] - r;
    auto it = std::lower_bound(pts_.begin(), pts_.end(), lo,
                               [](const RatVec& p, const Rational& v) { return p[0] < v; });
    const Rational hi = center[0] + r;
    std::size_t n = 0;
    for (; it != pts_.end() && (*it)[0] <= hi; ++it) {
      const Rational d = sup_dist(*it, center);
      if (kind == BallKind::Closed ? d <= r : d < r) ++n;
    }
    return n;
  }

 private:
  const std::vector<RatVec>& pts_;
};

bool covers_core(const std::vector<RatVec>& pts, const Box& core, const Rational& t) {
  const std::size_t d = core.dim();
  std::vector<RatVec> relevant;
  const Box grown = core.expand(t);
  for (const auto& p : pts)
    if (grown.contains(p)) relevant.push_back(p);
  if (relevant.empty()) return false;

  // Every box boundary is a breakpoint, so each elementary cell is either
  // inside a box or has interior disjoint from it; testing the midpoint
  // decides the whole closed cell.
  std::vector<std::vector<Rational>> mids(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Rational> bp{core.lo[j], core.hi[j]};
    for (const auto& p : relevant) {
      for (const Rational& v : {Rational(p[j] - t), Rational(p[j] + t)})
        if (v > core.lo[j] && v < core.hi[j]) bp.push_back(v);
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    if (bp.size() == 1) {
      mids[j].push_back(bp[0]);
    } else {
      for (std::size_t i = 0; i + 1 < bp.size(); ++i) mids[j].push_back((bp[i] + bp[i + 1]) / 2);
    }
  }
  const SupIndex index(relevant);
  std::vector<std::size_t> idx(d, 0);
  RatVec x(d);
  while (true) {
    for (std::size_t j = 0; j < d; ++j) x[j] = mids[j][idx[j]];
    if (!index.any_within(x, t)) return false;
    std::size_t j = 0;
    while (j < d && ++idx[j] == mids[j].size()) idx[j++] = 0;
    if (j == d) break;
  }
  return true;
}

}  // namespace

Rational covering_radius(const PointPatch& patch, const Box& core) {
  if (patch.empty()) throw PreconditionError("no points");
  if (core.dim() != patch.dim()) throw InputError("core dimension does not match patch dimension");
  if (!patch.region().contains(core)) throw PreconditionError("core escapes region");

  const std::size_t d = patch.dim();
  std::vector<Rational> candidates{Rational(0)};
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Rational> coords;
    coords.reserve(patch.size());
    for (const auto& p : patch.points()) coords.push_back(p[j]);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    for (std::size_t a = 0; a < coords.size(); ++a) {
      candidates.push_back(abs_of(coords[a] - core.lo[j]));
      candidates.push_back(abs_of(coords[a] - core.hi[j]));
      for (std::size_t b = a + 1; b < coords.size(); ++b) candidates.push_back((coords[b] - coords[a]) / 2);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::size_t lo = 0, hi = candidates.size() - 1;
  if (!covers_core(patch.points(), core, candidates[hi]))
    throw CertificateFailure("covering radius search found no covering candidate");
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (covers_core(patch.points(), core, candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

DensityReport density_report(const PointPatch& patch, const std::vector<Rational>& radii, BallKind kind) {
  if (radii.empty()) throw PreconditionError("no scales");
  const std::size_t d = patch.dim();
  const Box& region = patch.region();
  const SupIndex index(patch.points());

  DensityReport report;
  bool have = false;
  for (const Rational& r : radii) {
    if (r <= 0) throw InputError("density radius must be positive");
    std::vector<std::vector<Rational>> axes(d);
    bool fits = true;
    const Rational pitch = r / 2;
    for (std::size_t j = 0; j < d && fits; ++j) {
      const Rational first = region.lo[j] + r;
      const Rational last = region.hi[j] - r;
      if (first > last) {
        fits = false;
        break;
      }
      for (Rational c = first; c <= last; c += pitch) axes[j].push_back(c);
    }
    if (!fits) {
      report.skipped_radii.push_back(r);
      continue;
    }
    report.window_radii.push_back(r);
    Rational volume = 1;
    for (std::size_t j = 0; j < d; ++j) volume *= 2 * r;

    std::vector<std::size_t> idx(d, 0);
    RatVec center(d);
    while (true) {
      for (std::size_t j = 0; j < d; ++j) center[j] = axes[j][idx[j]];
      const std::size_t n = index.count_in(center, r, kind);
      Rational dens = Rational(Integer(n)) / volume;
      if (!have || dens > report.upper_estimate) report.upper_estimate = dens;
      if (!have || dens < report.lower_estimate) report.lower_estimate = dens;
      have = true;
      report.per_window_counts.push_back({r, center, n, std::move(dens)});
      std::size_t j = 0;
      while (j < d && ++idx[j] == axes[j].size()) idx[j++] = 0;
      if (j == d) break;
    }
  }
  if (!have) throw PreconditionError("no scale fits inside the region");
  return report;
}

namespace {

std::vector<RatVec> differences_in_core(const PointPatch& patch, const Box& core) {
  std::unordered_set<RatVec, RatVecHash> seen;
  for (const auto& a : patch.points())
    for (const auto& b : patch.points()) {
      RatVec diff = sub(a, b);
      if (core.contains(diff)) seen.insert(std::move(diff));
    }
  std::vector<RatVec> out(seen.begin(), seen.end());
  sort_unique(out);
  return out;
}

}  // namespace

std::optional<FiniteSet> check_condition_iii(const PointPatch& patch, const Box& core, std::size_t max_f) {
  if (patch.empty()) throw PreconditionError("no points");
  if (max_f == 0) throw InputError("max_f must be at least 1");
  const std::vector<RatVec> targets = differences_in_core(patch, core);
  std::vector<bool> covered(targets.size(), false);
  std::size_t remaining = targets.size();
  std::vector<RatVec> chosen;

  while (remaining > 0 && chosen.size() < max_f) {
    // Offsets f = t - a covering an uncovered target t; pick the one covering
    // the most, ties to the smaller norm then lexicographically.
    std::map<RatVec, std::size_t, LexLess> gain;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (covered[i]) continue;
      for (const auto& a : patch.points()) ++gain[sub(targets[i], a)];
    }
    auto best = gain.begin();
    for (auto it = gain.begin(); it != gain.end(); ++it)
      if (it->second > best->second ||
          (it->second == best->second && sup_norm(it->first) < sup_norm(best->first)))
        best = it;
    const RatVec f = best->first;
    chosen.push_back(f);
    const FiniteSet set = patch.to_set();
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (!covered[i] && set.contains(sub(targets[i], f))) {
        covered[i] = true;
        --remaining;
      }
    }
  }
  if (remaining > 0) return std::nullopt;
  return FiniteSet(patch.dim(), std::move(chosen));
}

bool verify_condition_iii(const PointPatch& patch, const Box& core, const FiniteSet& f) {
  const FiniteSet set = patch.to_set();
  for (const auto& t : differences_in_core(patch, core)) {
    bool ok = false;
    for (const auto& shift : f)
      if (set.contains(sub(t, shift))) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

}  // namespace meyer
