#pragma once

// Exact arithmetic in a real quadratic field Q(sqrt D), plus the small
// amount of linear algebra the cut-and-project code needs. Values with a
// zero irrational part mix freely with any field; two genuinely irrational
// values must share D.

#include <optional>
#include <string>
#include <vector>

#include "meyer/rational.hpp"

namespace meyer {

class Quad {
 public:
  Quad() = default;
  Quad(const Rational& a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  Quad(long a) : a_(a) {}             // NOLINT(google-explicit-constructor)
  /// a + b sqrt(D). D must be positive; perfect squares are folded into a.
  Quad(const Rational& a, const Rational& b, long d);
  static Quad sqrt(long d) { return Quad(0, 1, d); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  /// 0 when the value is rational.
  long radicand() const { return sgn(b_) == 0 ? 0 : d_; }
  bool is_rational() const { return sgn(b_) == 0; }
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  int sign() const;

  /// a + b s for a rational stand-in s of sqrt(D).
  Rational substitute(const Rational& s) const { return a_ + b_ * s; }
  Integer floor() const;
  Integer ceil() const;
  /// Rational upper bound on |x|.
  Rational abs_upper() const;
  Quad abs() const { return sign() < 0 ? -*this : *this; }
  Quad conjugate() const;

  Quad operator-() const;
  Quad& operator+=(const Quad& o);
  Quad& operator-=(const Quad& o);
  Quad& operator*=(const Quad& o);
  Quad& operator/=(const Quad& o);
  friend Quad operator+(Quad x, const Quad& y) { return x += y; }
  friend Quad operator-(Quad x, const Quad& y) { return x -= y; }
  friend Quad operator*(Quad x, const Quad& y) { return x *= y; }
  friend Quad operator/(Quad x, const Quad& y) { return x /= y; }
  friend bool operator==(const Quad& x, const Quad& y) { return x.a_ == y.a_ && x.b_ == y.b_ && (sgn(x.b_) == 0 || x.d_ == y.d_); }
  friend bool operator<(const Quad& x, const Quad& y) { return (x - y).sign() < 0; }
  friend bool operator>(const Quad& x, const Quad& y) { return y < x; }
  friend bool operator<=(const Quad& x, const Quad& y) { return !(y < x); }
  friend bool operator>=(const Quad& x, const Quad& y) { return !(x < y); }

  std::string str() const;

 private:
  long merge(const Quad& o) const;

  Rational a_;
  Rational b_;
  long d_ = 0;
};

using QuadVec = std::vector<Quad>;
using QuadMatrix = std::vector<QuadVec>;

struct QuadVecHash {
  std::size_t operator()(const QuadVec& v) const;
};

QuadVec to_quad(const RatVec& v);
/// Lexicographic comparison by exact value.
bool quad_less(const QuadVec& x, const QuadVec& y);
Quad quad_sup_norm(const QuadVec& v);

/// Rational s with |s - sqrt(D)| <= 1/q (q >= 1), s <= sqrt(D).
Rational sqrt_lower(long d, const Integer& q);

/// The common radicand of every irrational entry (0 if none); throws
/// InputError when two different radicands occur.
long common_radicand(const QuadMatrix& m);

// ---------------------------------------------------------------- linear algebra

inline bool field_zero(const Rational& x) { return sgn(x) == 0; }
inline bool field_zero(const Quad& x) { return x.is_zero(); }

template <class F>
using Matrix = std::vector<std::vector<F>>;

template <class F>
struct Echelon {
  Matrix<F> rows;                   // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;  // pivot column per row
};

template <class F>
Echelon<F> rref(Matrix<F> m, std::size_t cols) {
  Echelon<F> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && field_zero(m[p][c])) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const F inv = F(1) / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || field_zero(m[i][c])) continue;
      const F f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

template <class F>
std::size_t rank(const Matrix<F>& m, std::size_t cols) {
  return rref(m, cols).pivots.size();
}

template <class F>
Matrix<F> transpose(const Matrix<F>& m, std::size_t cols) {
  Matrix<F> t(cols, std::vector<F>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
  return t;
}

/// Basis of {x : m x = 0}.
template <class F>
Matrix<F> nullspace(const Matrix<F>& m, std::size_t cols) {
  const Echelon<F> e = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : e.pivots) is_pivot[c] = true;
  Matrix<F> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> x(cols, F(0));
    x[free] = F(1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = -e.rows[i][free];
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Some x with m x = rhs, if one exists.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& m, const std::vector<F>& rhs, std::size_t cols) {
  Matrix<F> aug = m;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
  const Echelon<F> e = rref(aug, cols + 1);
  std::vector<F> x(cols, F(0));
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == cols) return std::nullopt;
    x[e.pivots[i]] = e.rows[i][cols];
  }
  return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
  const std::size_t n = m.size();
  Matrix<F> aug = m;
  for (std::size_t i = 0; i < n; ++i) {
    aug[i].resize(2 * n, F(0));
    aug[i][n + i] = F(1);
  }
  const Echelon<F> e = rref(aug, 2 * n);
  if (e.pivots.size() < n || e.pivots[n - 1] >= n) return std::nullopt;
  Matrix<F> inv(n, std::vector<F>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
  return inv;
}

template <class F>
Matrix<F> multiply(const Matrix<F>& a, const Matrix<F>& b, std::size_t inner, std::size_t cols) {
  Matrix<F> out(a.size(), std::vector<F>(cols, F(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (field_zero(a[i][k])) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

/// Right inverse P of a full-row-rank m (m P = I): P = m^T (m m^T)^{-1}.
template <class F>
std::optional<Matrix<F>> right_inverse(const Matrix<F>& m, std::size_t cols) {
  const Matrix<F> t = transpose(m, cols);
  const auto g = inverse(multiply(m, t, cols, m.size()));
  if (!g) return std::nullopt;
  return multiply(t, *g, m.size(), m.size());
}

// ---------------------------------------------------------------- integer lattices

using IntMatrix = std::vector<std::vector<Integer>>;

/// Row Hermite normal form: nonzero rows spanning the same Z-module, with
/// positive pivots and reduced entries above each pivot.
IntMatrix hermite_rows(IntMatrix rows, std::size_t cols);

struct IntegerSplit {
  std::vector<Integer> unit;  // u with <u, c> = gcd(c)
  IntMatrix kernel;           // basis of {n : <n, c> = 0}
  Integer gcd;
};

/// Splits Z^m along the functional n -> <n, c>.
IntegerSplit split_functional(const std::vector<Integer>& c);

/// Integer basis of the rational kernel {n in Z^m : n M = 0} for a rational
/// m x k matrix M, returned as primitive saturated generators.
IntMatrix integer_left_kernel(const Matrix<Rational>& m, std::size_t cols);

/// Real-field expansion of a quadratic row vector: (a-parts, b-parts).
RatVec rational_expansion(const QuadVec& v);

}  // namespace meyer
