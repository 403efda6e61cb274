#pragma once

// Lifting a finite patch of a candidate Meyer set to a cut-and-project
// description: doubling profile, normalized cover, the lifted group
// Λ_N = <(a_i, e_i / l_i)>, its discreteness and containment certificates,
// and a drift verdict across a schedule of radii.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meyer/freiman.hpp"
#include "meyer/geometry.hpp"
#include "meyer/modelsets.hpp"

namespace meyer {

/// A ∩ B(0, n), sup-norm ball, closed. Throws InputError when the patch
/// region does not contain the ball.
PointPatch extract_patch(const PointPatch& a, const Rational& n);

struct DoublingRow {
  Rational n;
  std::size_t size = 0;             // |A_N|
  std::size_t difference_size = 0;  // |A_N - A_N|
  Rational ratio;
};

struct DoublingProfile {
  std::vector<DoublingRow> rows;
  Rational upper_difference_density;  // D+(A - A), estimated at the largest N
  Rational lower_density;             // D-(A), same
  std::optional<Rational> bound;      // 4^d D+(A-A) / D-(A); empty when D- = 0
  bool within_bound = false;          // every ratio <= bound
  bool small_doubling = false;        // last ratio <= bound
};

DoublingProfile doubling_profile(const PointPatch& a, const std::vector<Rational>& schedule);

enum class CoverPath { Search, Proof };
std::string to_string(CoverPath p);

struct NormalizeOptions {
  CoverPath path = CoverPath::Search;
  long k_max = 64;
  std::uint64_t budget = 10'000'000;
};

struct NormalizedCover {
  FiniteSet f_prime;
  long k = 0;
  CoverPath path = CoverPath::Search;  // path that produced the result
  bool fell_back = false;              // proof path requested but not certified
  Rational scale = 1;                  // 1-relative-density factor (proof path)
  long k1 = 0;                         // torus covering constant (proof path)
  Rational raster_measure;             // measure of the rasterised thickening
  bool proof_certified = false;        // F + 2Q ⊆ F' + kQ checked
  std::string note;
};

/// Turns A ⊆ F + Q into A ⊆ F' + kQ with F' ⊆ B(0, N). Throws
/// CertificateFailure when neither path certifies.
NormalizedCover normalize_cover(const PointPatch& a_n, const CoverResult& cover, const Rational& n,
                                const NormalizeOptions& options = {});

struct LambdaBasis {
  std::vector<RatVec> vectors;       // v_i in R^{d+e}
  std::vector<std::size_t> kept;     // indices of cover steps used
  std::vector<std::size_t> dropped;  // steps with l_i = 0
  std::size_t d = 1;
  std::size_t e = 0;
};

LambdaBasis build_lambda(const CoverResult& cover);

struct DiscretenessCertificate {
  Rational r;                      // shortest nonzero sup-norm found
  bool certified = false;          // exhaustive within the searched radius
  std::vector<long> shortest;      // coefficients of a shortest vector
  Rational searched_radius;
  std::uint64_t explored = 0;
};

DiscretenessCertificate certify_discreteness(const std::vector<RatVec>& basis, std::uint64_t budget = 10'000'000);

struct ContainmentWitness {
  RatVec x;
  RatVec y;               // element of F'
  std::vector<long> n;    // x - y = sum n_i a_i, |n_i| <= k l_i
  RatVec internal;        // sum (n_i / l_i) e_i
};

struct ContainmentCertificate {
  bool ok = false;
  std::vector<ContainmentWitness> witnesses;
  std::optional<RatVec> offending;
};

/// Every point of A_N inside `core` equals y + π1(z) with y ∈ F', z ∈ Λ_N
/// and ||π2(z)|| <= k.
ContainmentCertificate certify_containment(const PointPatch& a_n, const FiniteSet& f_prime,
                                           const CoverResult& cover, long k, const Box& core,
                                           std::uint64_t budget = 10'000'000);

struct LiftCertificate {
  Rational n_value;
  Rational k_doubling;  // |A_N - A_N| / |A_N|
  CoverResult cover;
  NormalizedCover normalized;
  long k_cover = 0;
  LambdaBasis lambda;
  DiscretenessCertificate discreteness;
  Box core;
  ContainmentCertificate containment;
  bool containment_ok = false;
};

struct LiftOptions {
  CoverOptions cover;
  NormalizeOptions normalize;
  Rational core_inset = 5;
  Rational tolerance = 0;
  std::uint64_t budget = 10'000'000;
};

/// Runs the pipeline at one radius. Throws on failure.
LiftCertificate lift_at(const PointPatch& a, const Rational& n, const LiftOptions& options = {});

enum class Verdict { Stabilized, Drifting, Inconclusive };
std::string to_string(Verdict v);

struct StabilizationReport {
  std::vector<Rational> schedule;
  std::vector<LiftCertificate> certificates;
  std::vector<std::string> failures;                // one per failed N, "N: message"
  std::vector<std::optional<Rational>> basis_drift;  // empty entry: shapes differ
  std::vector<std::optional<Rational>> f_prime_drift;
  Rational tolerance;
  Verdict verdict = Verdict::Inconclusive;
  DoublingProfile doubling;
  std::optional<Scheme> final_scheme;
  bool final_cross_check = false;
  std::size_t final_core_points = 0;
};

/// Hermite form of the physical parts of a lifted basis.
std::vector<RatVec> canonical_steps(const LambdaBasis& basis);

StabilizationReport stabilize(const PointPatch& a, const std::vector<Rational>& schedule,
                              const LiftOptions& options = {});

struct InternalDimensionReport {
  std::size_t e = 0;
  Rational k;         // doubling ratio at the largest N
  double d_log2_k = 0;
  std::size_t d = 1;
};

InternalDimensionReport internal_dimension_report(const StabilizationReport& report);

}  // namespace meyer
