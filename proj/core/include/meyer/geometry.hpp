#pragma once

// Finite point patches in R^d with sup-norm Delone diagnostics.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "meyer/rational.hpp"
#include "meyer/sumsets.hpp"

namespace meyer {

/// A finite exact-coordinate point set observed inside a closed box.
class PointPatch {
 public:
  PointPatch() = default;
  /// Sorts and deduplicates the points. Throws InputError if a point has the
  /// wrong dimension or lies outside the region.
  PointPatch(std::size_t dim, std::vector<RatVec> points, Box region);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<RatVec>& points() const { return points_; }
  const Box& region() const { return region_; }

  FiniteSet to_set() const { return FiniteSet(dim_, points_); }
  /// Points inside `box`, with `box` as the new region.
  PointPatch restricted(const Box& box) const;
  /// Multiplies coordinates and region by a positive factor.
  PointPatch scaled(const Rational& factor) const;

  bool operator==(const PointPatch&) const = default;

 private:
  std::size_t dim_ = 1;
  std::vector<RatVec> points_;
  Box region_;
};

/// Minimal sup-norm distance over distinct pairs. Throws PreconditionError
/// ("degenerate patch") for fewer than two points.
Rational discreteness_radius(const std::vector<RatVec>& points);
Rational discreteness_radius(const PointPatch& patch);

/// A pair closer than r, if the points are not r-uniformly discrete.
std::optional<std::pair<RatVec, RatVec>> discreteness_violation(const std::vector<RatVec>& points, const Rational& r);

/// Smallest R such that every point of `core` is within sup-distance R of a
/// patch point. Exact: the answer is one of the finitely many critical
/// values |p_j - q_j|/2, |p_j - c_j| and is located by bisection over them.
Rational covering_radius(const PointPatch& patch, const Box& core);

enum class BallKind { Closed, Open };

struct DensityRow {
  Rational radius;
  RatVec center;
  std::size_t count = 0;
  Rational density;
};

struct DensityReport {
  Rational upper_estimate;
  Rational lower_estimate;
  std::vector<Rational> window_radii;   // radii actually used
  std::vector<Rational> skipped_radii;  // too large for the region
  std::vector<DensityRow> per_window_counts;
  bool warning() const { return !skipped_radii.empty(); }
};

/// Extremes of count/(2R)^d over a grid of centres with pitch R/2, clamped
/// so the ball stays inside the region.
DensityReport density_report(const PointPatch& patch, const std::vector<Rational>& radii,
                             BallKind kind = BallKind::Closed);

/// Greedy search for F with |F| <= max_f and (A - A) ∩ core ⊆ A + F.
std::optional<FiniteSet> check_condition_iii(const PointPatch& patch, const Box& core, std::size_t max_f);

/// Re-verifies (A - A) ∩ core ⊆ A + F by brute force.
bool verify_condition_iii(const PointPatch& patch, const Box& core, const FiniteSet& f);

}  // namespace meyer
