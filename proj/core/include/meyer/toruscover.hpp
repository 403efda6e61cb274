#pragma once

// Grid-exact Minkowski sums of unions of closed cells, on the torus
// (R/Z)^d and on R^d, and the constructive unit-cube covering.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meyer/rational.hpp"

namespace meyer {

/// A union of closed grid cells [c/n, (c+1)/n] (per axis) inside [0,1]^d.
/// Axis 0 is contiguous in memory; a "row" is a line of n cells along it.
class GridSet {
 public:
  GridSet() = default;
  GridSet(std::size_t dim, std::size_t resolution);
  static GridSet full(std::size_t dim, std::size_t resolution);
  /// Cells with lo_i <= c_i < hi_i on every axis.
  static GridSet box(std::size_t dim, std::size_t resolution, const std::vector<std::size_t>& lo,
                     const std::vector<std::size_t>& hi);

  std::size_t dim() const { return dim_; }
  std::size_t resolution() const { return n_; }
  std::size_t cell_count() const { return cells_; }
  std::size_t rows() const { return rows_; }

  bool test(const std::vector<std::size_t>& cell) const;
  void set(const std::vector<std::size_t>& cell, bool value = true);
  bool test_flat(std::size_t index) const;
  void set_flat(std::size_t index);

  std::size_t count() const;
  Rational measure() const;
  bool is_full() const;
  bool empty() const { return count() == 0; }
  /// Lexicographically first occupied cell, comparing the last axis first.
  std::optional<std::vector<std::size_t>> first_cell() const;
  /// Cyclic translate by -cell.
  GridSet shifted_to_origin(const std::vector<std::size_t>& cell) const;

  // Row access (row r holds the cells whose axis-0 index varies).
  bool row_test(std::size_t row, std::size_t i) const;
  std::size_t row_count(std::size_t row) const;

  bool operator==(const GridSet&) const = default;

  std::size_t words_per_row() const { return wpr_; }
  const std::vector<std::uint64_t>& words() const { return bits_; }
  std::vector<std::uint64_t>& words() { return bits_; }

 private:
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  std::size_t cells_ = 0;
  std::size_t rows_ = 0;
  std::size_t wpr_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Cellwise sum modulo n: cells i and j contribute i+j and i+j+1 per axis.
GridSet torus_sum(const GridSet& a, const GridSet& b);
/// k-fold torus sum (k >= 1).
GridSet torus_power(const GridSet& a, unsigned k);

/// Sorted disjoint inclusive runs of integer cells on the line; cell c is
/// [c/n, (c+1)/n]. Used for sums in R rather than on the torus.
struct CellRuns {
  std::vector<std::pair<long, long>> runs;

  static CellRuns from_row(const GridSet& g, std::size_t row);
  bool contains(long cell) const;
  bool covers(long first, long last) const;
  long size() const;
  /// Contains the point m (in units of one), i.e. touches the boundary m*n.
  bool contains_point(long m, long n) const;
};

CellRuns line_sum(const CellRuns& a, const CellRuns& b);
CellRuns line_power(const CellRuns& a, unsigned k);
/// Sum modulo `period` cells; the result is reduced into [0, period).
CellRuns cyclic_sum(const CellRuns& a, const CellRuns& b, long period);
CellRuns cyclic_power(const CellRuns& a, unsigned k, long period);

struct AxisTrace {
  std::size_t axis = 0;
  std::vector<std::size_t> line;  // fixed cell indices on the other axes
  Rational line_measure;
  long k1 = 0, m = 0, k2 = 0, k = 0;
  long origin_cell = 0;  // translation applied so that 0 lies in the set
  RatVec b;              // shift contributed by this axis
};

struct CoverCertificate {
  long k = 0;
  RatVec b;
  long k1 = 0;
  long k2 = 0;
  long m = 0;
  long k_prime = 0;  // per-axis k' (equal to k when d = 1)
  std::vector<AxisTrace> trace;
};

/// Constructive covering kA + b ⊇ [0,1]^d for λ(A) >= eps. Throws
/// PreconditionError when measure < eps or when the grid is too coarse to
/// locate the integer m or a qualifying line.
CoverCertificate cover_unit_cube(const GridSet& a, const Rational& eps);

/// Re-verifies the certificate without reusing the construction: for d = 1
/// the full k-fold sum of A in R is computed; for d >= 2 each recorded line
/// is summed in R and the padded line sums are checked to span the cube.
bool verify_cover_certificate(const GridSet& a, const CoverCertificate& cert);

/// Full-grid oracle: computes kA in R^d cell by cell and checks that
/// [0,1]^d - b is covered. Memory grows like (k n)^d; meant for small n.
bool verify_cover_bruteforce(const GridSet& a, const CoverCertificate& cert, std::size_t max_cells = 1u << 24);

/// Image of the unit cube under x -> M x + t.
struct AffineMap {
  std::vector<RatVec> matrix;  // rows
  RatVec offset;
  RatVec apply(const RatVec& x) const;
  RatVec apply_linear(const RatVec& x) const;
};

struct ParallelepipedCertificate {
  CoverCertificate unit;
  AffineMap map;
  RatVec b;  // k T(A) + b ⊇ T([0,1]^d)
};

ParallelepipedCertificate cover_parallelepiped(const GridSet& a, const Rational& eps, const AffineMap& map);

}  // namespace meyer
