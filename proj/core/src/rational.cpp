#include "meyer/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "meyer/errors.hpp"

namespace meyer {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InputError("malformed rational '" + std::string(whole) + "'");
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

Integer pow10(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

std::uint64_t default_budget() {
  if (const char* env = std::getenv("MEYERLIFT_BUDGET")) {
    try {
      const Rational v = parse_rational(env);
      if (v > 0) return static_cast<std::uint64_t>(floor_of(v).get_d());
    } catch (const Error&) {
    }
  }
  return 10'000'000;
}

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw InputError("empty rational");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Integer num = parse_integer(s.substr(0, slash), text);
    const Integer den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    const Integer ex = parse_integer(s.substr(e + 1), text);
    if (!ex.fits_slong_p()) throw InputError("exponent out of range in '" + std::string(text) + "'");
    exponent = ex.get_si();
    s = s.substr(0, e);
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto ip = s.substr(0, dot);
    const auto fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw InputError("malformed rational '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    frac_digits = static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw InputError("malformed rational '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Integer mant(digits, 10);
  if (negative) mant = -mant;
  const long shift = exponent - frac_digits;
  Rational q = shift >= 0 ? Rational(mant * pow10(static_cast<unsigned long>(shift)))
                          : Rational(mant, pow10(static_cast<unsigned long>(-shift)));
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& raw) {
  Rational value = raw;
  value.canonicalize();
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const RatVec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

Rational ratio(const Integer& n, const Integer& d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Integer floor_of(const Rational& value) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& value) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return r;
}

Rational abs_of(const Rational& value) { return value < 0 ? Rational(-value) : value; }

RatVec zero_vec(std::size_t dim) { return RatVec(dim, Rational(0)); }

RatVec add(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatVec sub(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVec neg(const RatVec& a) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

RatVec scale(const RatVec& a, const Rational& s) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

Rational sup_norm(const RatVec& a) {
  Rational m = 0;
  for (const auto& x : a) {
    const Rational ax = abs_of(x);
    if (ax > m) m = ax;
  }
  return m;
}

Rational sup_dist(const RatVec& a, const RatVec& b) {
  Rational m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Rational d = abs_of(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

bool is_zero(const RatVec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& x) { return sgn(x) == 0; });
}

int lex_compare(const RatVec& a, const RatVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  return 0;
}

std::size_t hash_integer(const Integer& z) {
  const mpz_srcptr p = z.get_mpz_t();
  std::size_t h = static_cast<std::size_t>(p->_mp_size) * 0x9e3779b97f4a7c15ULL;
  const std::size_t n = mpz_size(p);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<std::size_t>(mpz_getlimbn(p, static_cast<mp_size_t>(i))) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::size_t hash_rational(const Rational& q) {
  return hash_integer(q.get_num()) * 31 + hash_integer(q.get_den());
}

std::size_t RatVecHash::operator()(const RatVec& v) const {
  std::size_t h = v.size();
  for (const auto& x : v) h = h * 1000003 ^ hash_rational(x);
  return h;
}

void sort_unique(std::vector<RatVec>& points) {
  std::sort(points.begin(), points.end(), LexLess{});
  points.erase(std::unique(points.begin(), points.end()), points.end());
}

Integer common_denominator(const std::vector<RatVec>& points) {
  Integer l = 1;
  for (const auto& p : points)
    for (const auto& x : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

bool Box::contains(const RatVec& x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

bool Box::contains(const Box& other) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
  return true;
}

Box Box::inset(const Rational& margin) const {
  Box b{lo, hi};
  for (std::size_t i = 0; i < lo.size(); ++i) {
    b.lo[i] += margin;
    b.hi[i] -= margin;
    if (b.lo[i] > b.hi[i]) throw PreconditionError("inset of " + to_string(margin) + " empties the box");
  }
  return b;
}

Box Box::expand(const Rational& margin) const {
  Box b{lo, hi};
  for (std::size_t i = 0; i < lo.size(); ++i) {
    b.lo[i] -= margin;
    b.hi[i] += margin;
  }
  return b;
}

Box Box::cube(std::size_t dim, const Rational& radius) {
  return Box{RatVec(dim, Rational(-radius)), RatVec(dim, radius)};
}

}  // namespace meyer
