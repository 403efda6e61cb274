#pragma once

#include <set>
#include <vector>

#include "meyer/geometry.hpp"
#include "meyer/modelsets.hpp"
#include "meyer/sumsets.hpp"

namespace meyer::testing {

inline RatVec v1(const Rational& x) { return {x}; }
inline RatVec v2(const Rational& x, const Rational& y) { return {x, y}; }

inline FiniteSet ints(const std::vector<long>& xs) { return FiniteSet::of_integers(xs); }

inline std::vector<long> as_longs(const FiniteSet& s) {
  std::vector<long> out;
  for (const auto& x : s) out.push_back(x[0].get_num().get_si());
  return out;
}

// Lattice a Z^d restricted to [-r, r]^d.
inline PointPatch lattice_patch(std::size_t d, const Rational& a, long r) {
  std::vector<RatVec> pts;
  const long m = floor_of(Rational(r) / a).get_si();
  std::vector<long> idx(d, -m);
  while (true) {
    RatVec x;
    for (long i : idx) x.push_back(a * i);
    pts.push_back(x);
    std::size_t k = 0;
    while (k < d && ++idx[k] > m) idx[k++] = -m;
    if (k == d) break;
  }
  return PointPatch(d, pts, Box::cube(d, r));
}

inline Quad phi() { return Quad(Rational(1, 2), Rational(1, 2), 5); }

// Fibonacci chain: Γ = <(1,1), (φ, -1/φ)>, Ω = [-1, φ-1].
inline Scheme fibonacci_scheme() {
  Scheme s;
  s.d = 1;
  s.e = 1;
  s.generators = {{Quad(1), Quad(1)}, {phi(), Quad(-1) / phi()}};
  s.window = {QuadBox{{Quad(-1)}, {phi() - Quad(1)}}};
  return s;
}

inline Scheme integer_scheme() {
  Scheme s;
  s.d = 1;
  s.e = 0;
  s.generators = {{Quad(1)}};
  s.window = {QuadBox{}};
  return s;
}

inline Scheme one_one(const QuadMatrix& gens, const Quad& lo, const Quad& hi) {
  Scheme s;
  s.d = 1;
  s.e = 1;
  s.generators = gens;
  s.window = {QuadBox{{lo}, {hi}}};
  return s;
}

}  // namespace meyer::testing
