#pragma once

// Cut-and-project schemes M = π1(Γ ∩ (R^d × Ω)) with generators in a real
// quadratic field, shift sets F, and the reduction to a scheme whose group
// is a lattice, projects injectively and has dense internal image.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meyer/geometry.hpp"
#include "meyer/quadratic.hpp"

namespace meyer {

/// Closed box with quadratic-field corners. Zero-dimensional boxes are the
/// single point of R^0.
struct QuadBox {
  QuadVec lo;
  QuadVec hi;
  std::size_t dim() const { return lo.size(); }
  bool contains(const QuadVec& x) const;
  static QuadBox from(const Box& b) { return {to_quad(b.lo), to_quad(b.hi)}; }
};

struct Scheme {
  std::size_t d = 1;
  std::size_t e = 0;
  QuadMatrix generators;         // rows in R^{d+e}
  std::vector<QuadBox> window;   // union of boxes in R^e
  std::vector<QuadVec> shifts;   // in R^d; empty means {0}

  /// Throws InputError when sizes disagree.
  void validate() const;
  std::vector<QuadVec> shift_set() const;
  long radicand() const;
};

struct GroupBasis {
  QuadMatrix basis;        // Z-basis of the generated group
  std::size_t z_rank = 0;  // rank as an abelian group
  std::size_t r_rank = 0;  // dimension of the real span
  bool discrete() const { return z_rank == r_rank; }
};

/// Z-basis of the group generated by `rows` (all of length `cols`).
GroupBasis group_basis(const QuadMatrix& rows, std::size_t cols);

/// Exact points of F + M inside `region`, sorted lexicographically.
std::vector<QuadVec> generate_exact(const Scheme& s, const Box& region, std::uint64_t budget = 10'000'000);

struct GenerateOptions {
  /// sqrt(D) is replaced by a rational within 1/precision.
  Integer precision = Integer("1000000000000000000000000000000");
  /// Decide window membership exactly; otherwise by certified intervals
  /// around the rational stand-in, with undecided points set aside.
  bool exact_window = true;
  std::uint64_t budget = 10'000'000;
  std::size_t max_ambiguous = 10'000;
};

struct GeneratedPatch {
  PointPatch patch;
  std::vector<RatVec> ambiguous;
  Rational sqrt_stand_in;  // rational used for sqrt(D) (0 when D = 0)
  long radicand = 0;
  Rational error_bound;    // max coordinate error of the reported points
};

/// Points of F + M with π1 in `region`. Irrational coordinates are reported
/// through one fixed rational stand-in for sqrt(D), so sums and differences
/// of reported points are exact images of the group law.
GeneratedPatch generate(const Scheme& s, const Box& region, const GenerateOptions& options = {});

struct ConditionReport {
  bool discrete = false;
  bool lattice = false;
  bool injective = false;
  bool dense = false;
  std::size_t z_rank = 0;
  std::size_t r_rank = 0;
  std::optional<QuadVec> kernel_witness;  // γ ≠ 0 with π1(γ) = 0
  std::optional<QuadVec> dual_witness;    // v in R^e with <v, π2(Γ)> = Z, or 0 on a proper subspace
  bool all() const { return lattice && injective && dense; }
};

ConditionReport check_conditions(const Scheme& s);

enum class Branch { NotLattice, NotInjective, NotDense };
std::string to_string(Branch b);

struct ReductionStep {
  Branch branch = Branch::NotLattice;
  Scheme before;
  Scheme after;
  QuadMatrix v0_basis;   // branch 1: complement of span Γ
  QuadMatrix u_basis;    // basis of the new internal space U, as vectors in R^e
  QuadVec gamma;         // branch 2: kernel vector; branch 3: <v, γ> = 1
  QuadVec v;             // branch 3: internal functional
  long n_max = 0;
  std::vector<long> slices;       // branch 3: n with a nonempty slice
  std::vector<QuadVec> e_shifts;  // branch 3: E
  bool containment_checked = false;
  bool containment_ok = false;
  std::size_t probe_points = 0;
};

struct ReduceOptions {
  Rational probe_radius = 30;
  std::uint64_t budget = 10'000'000;
  bool verify = true;
  /// Require a covering radius below probe_radius / 4 on the inset probe
  /// core before reducing.
  bool check_density = true;
};

struct ReduceResult {
  Scheme scheme;
  std::vector<ReductionStep> steps;
  ConditionReport final_report;
  Rational probe_covering_radius;
};

ReduceResult reduce(const Scheme& s, const ReduceOptions& options = {});

/// F_before + M_before ⊆ F_after + M_after on the cube of the given radius.
bool verify_step_containment(const ReductionStep& step, const Rational& probe_radius,
                             std::uint64_t budget = 10'000'000, std::size_t* probe_points = nullptr);

}  // namespace meyer
