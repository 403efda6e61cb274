#pragma once

// Exact rational scalars and vectors shared by every module.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace meyer {

using Rational = mpq_class;
using Integer = mpz_class;
using RatVec = std::vector<Rational>;

/// Parses "p/q", an integer, or a decimal such as "-0.125" / "3e-2".
/// Throws InputError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);
std::string to_string(const RatVec& v);

/// n/d in canonical form; d must be nonzero.
Rational ratio(const Integer& n, const Integer& d);

Integer floor_of(const Rational& value);
Integer ceil_of(const Rational& value);
Rational abs_of(const Rational& value);

RatVec zero_vec(std::size_t dim);
RatVec add(const RatVec& a, const RatVec& b);
RatVec sub(const RatVec& a, const RatVec& b);
RatVec neg(const RatVec& a);
RatVec scale(const RatVec& a, const Rational& s);
Rational sup_norm(const RatVec& a);
Rational sup_dist(const RatVec& a, const RatVec& b);
bool is_zero(const RatVec& a);

/// Lexicographic comparison; both vectors must have the same length.
int lex_compare(const RatVec& a, const RatVec& b);
struct LexLess {
  bool operator()(const RatVec& a, const RatVec& b) const { return lex_compare(a, b) < 0; }
};

std::size_t hash_integer(const Integer& z);
std::size_t hash_rational(const Rational& q);
struct RatVecHash {
  std::size_t operator()(const RatVec& v) const;
};

/// Sorts lexicographically and removes duplicates in place.
void sort_unique(std::vector<RatVec>& points);

/// Least common multiple of all denominators (1 for an empty list).
Integer common_denominator(const std::vector<RatVec>& points);

/// Closed axis-aligned box [lo, hi] in R^d. An empty `lo` means R^0.
struct Box {
  RatVec lo;
  RatVec hi;

  std::size_t dim() const { return lo.size(); }
  bool contains(const RatVec& x) const;
  bool contains(const Box& other) const;
  /// Shrinks every side by `margin`; throws if the result would be empty.
  Box inset(const Rational& margin) const;
  Box expand(const Rational& margin) const;
  static Box cube(std::size_t dim, const Rational& radius);
  bool operator==(const Box&) const = default;
};

}  // namespace meyer
