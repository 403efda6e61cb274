#pragma once

// Exact finite set algebra over rational vectors: A+B, A-B, kA-lA and the
// Pluennecke / Ruzsa-triangle verifiers.

#include <cstddef>
#include <vector>

#include "meyer/rational.hpp"

namespace meyer {

/// A finite set of rational vectors of a fixed dimension, kept sorted
/// lexicographically and free of duplicates.
class FiniteSet {
 public:
  explicit FiniteSet(std::size_t dim = 1) : dim_(dim) {}
  /// Sorts and deduplicates; throws InputError on a dimension mismatch.
  FiniteSet(std::size_t dim, std::vector<RatVec> elements);

  static FiniteSet zero(std::size_t dim) { return FiniteSet(dim, {zero_vec(dim)}); }
  /// Convenience for one-dimensional sets of integers.
  static FiniteSet of_integers(const std::vector<long>& values);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const std::vector<RatVec>& elements() const { return elements_; }
  const RatVec& operator[](std::size_t i) const { return elements_[i]; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  bool contains(const RatVec& x) const;
  bool is_subset_of(const FiniteSet& other) const;
  bool operator==(const FiniteSet& other) const = default;

 private:
  std::size_t dim_;
  std::vector<RatVec> elements_;
};

enum class SumBackend { Auto, SortedMerge, Hashing };

/// A + B. A + {} = {}.
FiniteSet sum(const FiniteSet& a, const FiniteSet& b, SumBackend backend = SumBackend::Auto);
/// A - B.
FiniteSet difference(const FiniteSet& a, const FiniteSet& b, SumBackend backend = SumBackend::Auto);
FiniteSet negate(const FiniteSet& a);
FiniteSet translate(const FiniteSet& a, const RatVec& t);

struct IteratedSet {
  FiniteSet set;
  /// Set when k = l = 0 and the {0} convention was applied.
  bool zero_fold = false;
};

/// kA - lA with 0A = {0}.
IteratedSet iterated(const FiniteSet& a, unsigned k, unsigned l);

/// |A+B| / |A|. Throws PreconditionError for empty A.
Rational doubling_constant(const FiniteSet& a, const FiniteSet& b);

struct PlunneckeReport {
  Rational k_constant;  // |A+B| / |A|
  Integer lhs;          // |kB - lB|
  Rational rhs;         // K^(k+l) |A|
  bool holds = false;
};

PlunneckeReport verify_plunnecke(const FiniteSet& a, const FiniteSet& b, unsigned k, unsigned l);

struct RuzsaReport {
  Integer lhs;  // |A| |B-C|
  Integer rhs;  // |A-B| |A-C|
  bool holds = false;
};

RuzsaReport verify_ruzsa_triangle(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c);

}  // namespace meyer
