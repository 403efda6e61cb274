#pragma once

// Desk-scale Freiman-Ruzsa covers: a proper symmetric GAP Q inside 2A-2A
// and a finite F with A ⊆ F + Q, found by a verified search. A returned
// success is always certified; a failure is inconclusive.

#include <cstddef>
#include <cstdint>

#include "meyer/gaps.hpp"
#include "meyer/rational.hpp"
#include "meyer/sumsets.hpp"

namespace meyer {

struct CoverOptions {
  std::size_t max_rank = 3;
  std::size_t max_f = 16;
  /// Bound on hash lookups and explored candidate tuples.
  std::uint64_t budget = 10'000'000;
  /// Number of shortest candidate steps combined for ranks >= 2.
  std::size_t pool = 48;
};

struct CoverStats {
  std::uint64_t candidates = 0;  // step tuples evaluated
  std::uint64_t lookups = 0;
  std::size_t ranks_tried = 0;
  std::size_t best_f = 0;  // smallest |F| seen (0 if none)
  bool budget_exhausted = false;
};

struct CoverResult {
  Gap q = Gap::point({Rational(0)});
  FiniteSet f;
  Rational doubling;  // |A + (-A)| / |A|
  bool cert_q_in_2a2a = false;
  bool cert_a_in_fq = false;
  bool success = false;  // certified and within the rank / |F| budgets
  Rational size_ratio;   // |Q| / |A|
  Integer dilation = 1;  // common denominator cleared before the search
  CoverStats stats;
};

/// Searches ranks 0..max_rank in order; within a rank, candidate steps are
/// drawn from 2A-2A by increasing sup-norm and the first tuple whose cover
/// needs at most max_f translates wins. Side lengths are maximised subject
/// to Q ⊆ 2A-2A and properness; F is the smaller of the maximal disjoint
/// translate family of the halved GAP and a greedy set cover.
CoverResult find_cover(const FiniteSet& a, const CoverOptions& options = {});

/// Re-checks Q ⊆ 2A-2A, A ⊆ F + Q and properness of Q from scratch.
bool verify_cover(const FiniteSet& a, const CoverResult& r, std::uint64_t budget = 10'000'000);

/// K -> K^2, the price of passing from |A+B| <= K|A| to the symmetric case.
Rational asymmetric_to_symmetric(const Rational& k);

}  // namespace meyer
