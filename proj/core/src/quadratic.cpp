#include "meyer/quadratic.hpp"

#include <algorithm>

#include "meyer/errors.hpp"

namespace meyer {

namespace {

bool perfect_square(long d, Integer& root) {
  root = ::sqrt(Integer(d));
  return root * root == d;
}

}  // namespace

Quad::Quad(const Rational& a, const Rational& b, long d) : a_(a), b_(b), d_(d) {
  if (d <= 0) throw InputError("radicand must be positive");
  Integer root;
  if (perfect_square(d, root)) {
    a_ += b_ * root;
    b_ = 0;
    d_ = 0;
  }
  if (sgn(b_) == 0) d_ = 0;
}

long Quad::merge(const Quad& o) const {
  const long x = radicand(), y = o.radicand();
  if (x && y && x != y)
    throw InputError("values from Q(sqrt " + std::to_string(x) + ") and Q(sqrt " + std::to_string(y) + ") mixed");
  return x ? x : y;
}

int Quad::sign() const {
  const int sa = sgn(a_), sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 with b^2 D (never equal for irrational sqrt D).
  const Rational a2 = a_ * a_, b2d = b_ * b_ * d_;
  return a2 > b2d ? sa : sb;
}

Quad Quad::operator-() const {
  Quad r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

Quad& Quad::operator+=(const Quad& o) {
  d_ = merge(o);
  a_ += o.a_;
  b_ += o.b_;
  if (sgn(b_) == 0) d_ = 0;
  return *this;
}

Quad& Quad::operator-=(const Quad& o) {
  d_ = merge(o);
  a_ -= o.a_;
  b_ -= o.b_;
  if (sgn(b_) == 0) d_ = 0;
  return *this;
}

Quad& Quad::operator*=(const Quad& o) {
  const long d = merge(o);
  const Rational a = a_ * o.a_ + b_ * o.b_ * d;
  const Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = a;
  b_ = b;
  d_ = sgn(b_) == 0 ? 0 : d;
  return *this;
}

Quad& Quad::operator/=(const Quad& o) {
  if (o.is_zero()) throw PreconditionError("division by zero in Q(sqrt D)");
  const long d = merge(o);
  const Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * d;
  Quad conj = o;
  conj.b_ = -conj.b_;
  *this *= conj;
  a_ /= norm;
  b_ /= norm;
  if (sgn(b_) == 0) d_ = 0;
  return *this;
}

Quad Quad::conjugate() const {
  Quad r = *this;
  r.b_ = -r.b_;
  return r;
}

Rational sqrt_lower(long d, const Integer& q) {
  const Integer s = ::sqrt(Integer(d) * q * q);
  return ratio(s, q);
}

Integer Quad::floor() const {
  if (is_rational()) return floor_of(a_);
  const Integer q = Integer(1) << 64;
  Integer n = floor_of(substitute(sqrt_lower(d_, q)));
  while (Quad(Rational(n)) > *this) --n;
  while (Quad(Rational(n + 1)) <= *this) ++n;
  return n;
}

Integer Quad::ceil() const {
  const Integer f = floor();
  return Quad(Rational(f)) == *this ? f : Integer(f + 1);
}

Rational Quad::abs_upper() const {
  if (is_rational()) return abs_of(a_);
  const Integer root = ::sqrt(Integer(d_)) + 1;
  return abs_of(a_) + abs_of(b_) * root;
}

std::string Quad::str() const {
  if (is_rational()) return to_string(a_);
  return to_string(a_) + (sgn(b_) < 0 ? "-" : "+") + to_string(abs_of(b_)) + "*sqrt(" + std::to_string(d_) + ")";
}

std::size_t QuadVecHash::operator()(const QuadVec& v) const {
  std::size_t h = v.size();
  for (const auto& x : v) h = (h * 1000003) ^ (hash_rational(x.a()) * 31 + hash_rational(x.b()));
  return h;
}

QuadVec to_quad(const RatVec& v) { return QuadVec(v.begin(), v.end()); }

bool quad_less(const QuadVec& x, const QuadVec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int s = (x[i] - y[i]).sign();
    if (s != 0) return s < 0;
  }
  return false;
}

Quad quad_sup_norm(const QuadVec& v) {
  Quad m;
  for (const auto& x : v)
    if (x.abs() > m) m = x.abs();
  return m;
}

long common_radicand(const QuadMatrix& m) {
  long d = 0;
  for (const auto& row : m)
    for (const auto& x : row) {
      const long r = x.radicand();
      if (!r) continue;
      if (d && r != d) throw InputError("entries from different quadratic fields");
      d = r;
    }
  return d;
}

RatVec rational_expansion(const QuadVec& v) {
  RatVec out;
  out.reserve(2 * v.size());
  for (const auto& x : v) out.push_back(x.a());
  for (const auto& x : v) out.push_back(x.b());
  return out;
}

// ---------------------------------------------------------------- integer lattices

namespace {

// Row-reduces `rows` on the first `cols` columns with unimodular operations;
// the remaining columns ride along.
std::size_t hermite_in_place(IntMatrix& rows, std::size_t cols) {
  std::size_t p = 0;
  for (std::size_t c = 0; c < cols && p < rows.size(); ++c) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = p; i < rows.size(); ++i)
        if (sgn(rows[i][c]) != 0 && (best == rows.size() || ::abs(rows[i][c]) < ::abs(rows[best][c]))) best = i;
      if (best == rows.size()) break;
      std::swap(rows[p], rows[best]);
      bool done = true;
      for (std::size_t i = p + 1; i < rows.size(); ++i) {
        if (sgn(rows[i][c]) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[p][c].get_mpz_t());
        for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= q * rows[p][j];
        if (sgn(rows[i][c]) != 0) done = false;
      }
      if (done) break;
    }
    if (p < rows.size() && sgn(rows[p][c]) != 0) {
      if (sgn(rows[p][c]) < 0)
        for (auto& x : rows[p]) x = -x;
      for (std::size_t i = 0; i < p; ++i) {
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[p][c].get_mpz_t());
        if (sgn(q) != 0)
          for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= q * rows[p][j];
      }
      ++p;
    }
  }
  return p;
}

}  // namespace

IntMatrix hermite_rows(IntMatrix rows, std::size_t cols) {
  const std::size_t r = hermite_in_place(rows, cols);
  rows.resize(r);
  return rows;
}

IntegerSplit split_functional(const std::vector<Integer>& c) {
  const std::size_t m = c.size();
  IntMatrix aug(m);
  for (std::size_t i = 0; i < m; ++i) {
    aug[i].assign(m + 1, Integer(0));
    aug[i][0] = c[i];
    aug[i][1 + i] = 1;
  }
  const std::size_t r = hermite_in_place(aug, 1);
  IntegerSplit out;
  out.gcd = r ? aug[0][0] : Integer(0);
  if (r) out.unit.assign(aug[0].begin() + 1, aug[0].end());
  for (std::size_t i = r; i < m; ++i) out.kernel.emplace_back(aug[i].begin() + 1, aug[i].end());
  return out;
}

IntMatrix integer_left_kernel(const Matrix<Rational>& mat, std::size_t cols) {
  const std::size_t m = mat.size();
  IntMatrix aug(m, std::vector<Integer>(cols + m, Integer(0)));
  for (std::size_t i = 0; i < m; ++i) aug[i][cols + i] = 1;
  // Scaling a column by a positive integer keeps the integer kernel.
  for (std::size_t j = 0; j < cols; ++j) {
    Integer den = 1;
    for (std::size_t i = 0; i < m; ++i) den = lcm(den, mat[i][j].get_den());
    for (std::size_t i = 0; i < m; ++i) aug[i][j] = mat[i][j].get_num() * (den / mat[i][j].get_den());
  }
  const std::size_t r = hermite_in_place(aug, cols);
  IntMatrix out;
  for (std::size_t i = r; i < m; ++i) out.emplace_back(aug[i].begin() + cols, aug[i].end());
  return out;
}

}  // namespace meyer
