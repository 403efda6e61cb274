#pragma once

// Generalized arithmetic progressions. A Gap is a datum (steps, lengths,
// base, symmetry); set equality between progressions is a separate question
// answered through enumerate().

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "meyer/rational.hpp"
#include "meyer/sumsets.hpp"

namespace meyer {

class Gap {
 public:
  /// Coefficients run over 0..l_i, or -l_i..l_i when symmetric (which
  /// forces a zero base). Throws InputError on inconsistent data.
  Gap(std::vector<RatVec> steps, std::vector<long> lengths, RatVec base, bool symmetric);
  /// Rank-0 progression {base}.
  static Gap point(RatVec base) { return Gap({}, {}, std::move(base), false); }

  std::size_t rank() const { return steps_.size(); }
  std::size_t dim() const { return base_.size(); }
  const std::vector<RatVec>& steps() const { return steps_; }
  const std::vector<long>& lengths() const { return lengths_; }
  const RatVec& base() const { return base_; }
  bool symmetric() const { return symmetric_; }

  long min_coefficient(std::size_t i) const { return symmetric_ ? -lengths_[i] : 0; }
  long max_coefficient(std::size_t i) const { return lengths_[i]; }
  /// Nominal size: prod(l_i + 1), or prod(2 l_i + 1) when symmetric.
  Integer size() const;
  /// Sum of n_i a_i + b.
  RatVec point_at(const std::vector<long>& coefficients) const;
  /// Same steps and base with every length multiplied by k (kP for symmetric P).
  Gap dilated(long k) const;

  bool operator==(const Gap&) const = default;

 private:
  std::vector<RatVec> steps_;
  std::vector<long> lengths_;
  RatVec base_;
  bool symmetric_;
};

/// Every coefficient tuple mapped to its point. Throws BudgetExceeded when
/// the nominal size exceeds `budget`.
FiniteSet enumerate(const Gap& g, std::uint64_t budget = 10'000'000);

bool is_proper(const Gap& g, std::uint64_t budget = 10'000'000);

struct DoublingReport {
  Integer sumset_size;  // |2P|
  Integer bound;        // 2^rank |P| when proper, 2^rank ||P|| otherwise
  bool proper = false;
  bool holds = false;   // meaningful as a theorem check only when proper
};

DoublingReport doubling_check(const Gap& g, std::uint64_t budget = 10'000'000);

struct HalveResult {
  Gap gap;
  bool padded = false;  // some odd length was padded by one first
};

HalveResult halve(const Gap& g);

/// Coefficients in range with x = sum n_i a_i + b, if any.
std::optional<std::vector<long>> membership(const Gap& g, const RatVec& x, std::uint64_t budget = 10'000'000);

/// Bounded integer search: visits every n with lo_i <= n_i <= hi_i and
/// ||sum n_i v_i - target||_inf <= radius, in lexicographic order of n.
/// The visitor returns false to stop early. The last coefficient is solved
/// exactly, earlier ones are pruned with interval bounds. Throws
/// BudgetExceeded once more than `budget` partial tuples were explored.
struct CoefficientSearch {
  std::vector<RatVec> vectors;
  std::vector<long> lo;
  std::vector<long> hi;
  RatVec target;
  Rational radius = 0;
  std::uint64_t budget = 10'000'000;

  using Visitor = std::function<bool(const std::vector<long>& n, const RatVec& value)>;
  /// Returns the number of explored tuples.
  std::uint64_t run(const Visitor& visit) const;
};

}  // namespace meyer
