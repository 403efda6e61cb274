#include "meyer/toruscover.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "meyer/errors.hpp"

namespace meyer {

GridSet::GridSet(std::size_t dim, std::size_t resolution) : dim_(dim), n_(resolution) {
  if (dim == 0) throw InputError("grid dimension must be positive");
  if (resolution == 0 || (resolution & (resolution - 1)) != 0)
    throw InputError("grid resolution must be a power of two");
  cells_ = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (cells_ > (std::size_t(1) << 40) / resolution) throw InputError("grid too large");
    cells_ *= resolution;
  }
  rows_ = cells_ / n_;
  wpr_ = (n_ + 63) / 64;
  bits_.assign(rows_ * wpr_, 0);
}

GridSet GridSet::full(std::size_t dim, std::size_t resolution) {
  GridSet g(dim, resolution);
  for (std::size_t r = 0; r < g.rows_; ++r)
    for (std::size_t i = 0; i < g.n_; ++i) g.bits_[r * g.wpr_ + i / 64] |= std::uint64_t(1) << (i % 64);
  return g;
}

GridSet GridSet::box(std::size_t dim, std::size_t resolution, const std::vector<std::size_t>& lo,
                     const std::vector<std::size_t>& hi) {
  GridSet g(dim, resolution);
  if (lo.size() != dim || hi.size() != dim) throw InputError("box corner of the wrong dimension");
  for (std::size_t j = 0; j < dim; ++j)
    if (lo[j] > hi[j] || hi[j] > resolution) throw InputError("box outside the grid");
  std::vector<std::size_t> c(dim);
  for (std::size_t idx = 0; idx < g.cells_; ++idx) {
    std::size_t rest = idx;
    bool in = true;
    for (std::size_t j = 0; j < dim; ++j) {
      c[j] = rest % resolution;
      rest /= resolution;
      in = in && c[j] >= lo[j] && c[j] < hi[j];
    }
    if (in) g.set_flat(idx);
  }
  return g;
}

bool GridSet::test_flat(std::size_t index) const {
  const std::size_t row = index / n_, i = index % n_;
  return (bits_[row * wpr_ + i / 64] >> (i % 64)) & 1;
}

void GridSet::set_flat(std::size_t index) {
  const std::size_t row = index / n_, i = index % n_;
  bits_[row * wpr_ + i / 64] |= std::uint64_t(1) << (i % 64);
}

namespace {

std::size_t flat(const std::vector<std::size_t>& cell, std::size_t n) {
  std::size_t idx = 0;
  for (std::size_t j = cell.size(); j-- > 0;) {
    if (cell[j] >= n) throw InputError("cell index out of range");
    idx = idx * n + cell[j];
  }
  return idx;
}

}  // namespace

bool GridSet::test(const std::vector<std::size_t>& cell) const {
  if (cell.size() != dim_) throw InputError("cell of the wrong dimension");
  return test_flat(flat(cell, n_));
}

void GridSet::set(const std::vector<std::size_t>& cell, bool value) {
  if (cell.size() != dim_) throw InputError("cell of the wrong dimension");
  const std::size_t idx = flat(cell, n_);
  const std::size_t row = idx / n_, i = idx % n_;
  auto& w = bits_[row * wpr_ + i / 64];
  const std::uint64_t mask = std::uint64_t(1) << (i % 64);
  w = value ? (w | mask) : (w & ~mask);
}

std::size_t GridSet::count() const {
  std::size_t c = 0;
  for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

Rational GridSet::measure() const { return ratio(Integer(static_cast<unsigned long>(count())), Integer(static_cast<unsigned long>(cells_))); }

bool GridSet::is_full() const { return count() == cells_; }

bool GridSet::row_test(std::size_t row, std::size_t i) const { return (bits_[row * wpr_ + i / 64] >> (i % 64)) & 1; }

std::size_t GridSet::row_count(std::size_t row) const {
  std::size_t c = 0;
  for (std::size_t w = 0; w < wpr_; ++w) c += static_cast<std::size_t>(std::popcount(bits_[row * wpr_ + w]));
  return c;
}

std::optional<std::vector<std::size_t>> GridSet::first_cell() const {
  for (std::size_t idx = 0; idx < cells_; ++idx)
    if (test_flat(idx)) {
      std::vector<std::size_t> c(dim_);
      std::size_t rest = idx;
      for (std::size_t j = 0; j < dim_; ++j) {
        c[j] = rest % n_;
        rest /= n_;
      }
      return c;
    }
  return std::nullopt;
}

GridSet GridSet::shifted_to_origin(const std::vector<std::size_t>& cell) const {
  GridSet out(dim_, n_);
  std::vector<std::size_t> c(dim_);
  for (std::size_t idx = 0; idx < cells_; ++idx) {
    if (!test_flat(idx)) continue;
    std::size_t rest = idx;
    for (std::size_t j = 0; j < dim_; ++j) {
      c[j] = (rest % n_ + n_ - cell[j]) % n_;
      rest /= n_;
    }
    out.set_flat(flat(c, n_));
  }
  return out;
}

// ---------------------------------------------------------------- runs

namespace {

void normalize(std::vector<std::pair<long, long>>& runs) {
  std::sort(runs.begin(), runs.end());
  std::vector<std::pair<long, long>> out;
  for (const auto& r : runs) {
    if (!out.empty() && r.first <= out.back().second + 1)
      out.back().second = std::max(out.back().second, r.second);
    else
      out.push_back(r);
  }
  runs.swap(out);
}

}  // namespace

CellRuns CellRuns::from_row(const GridSet& g, std::size_t row) {
  CellRuns out;
  const long n = static_cast<long>(g.resolution());
  long start = -1;
  for (long i = 0; i < n; ++i) {
    const bool on = g.row_test(row, static_cast<std::size_t>(i));
    if (on && start < 0) start = i;
    if (!on && start >= 0) {
      out.runs.emplace_back(start, i - 1);
      start = -1;
    }
  }
  if (start >= 0) out.runs.emplace_back(start, n - 1);
  return out;
}

bool CellRuns::contains(long cell) const { return covers(cell, cell); }

bool CellRuns::covers(long first, long last) const {
  auto it = std::upper_bound(runs.begin(), runs.end(), std::make_pair(first, std::numeric_limits<long>::max()));
  if (it == runs.begin()) return false;
  --it;
  return it->first <= first && it->second >= last;
}

long CellRuns::size() const {
  long s = 0;
  for (const auto& r : runs) s += r.second - r.first + 1;
  return s;
}

bool CellRuns::contains_point(long m, long n) const { return contains(m * n - 1) || contains(m * n); }

CellRuns line_sum(const CellRuns& a, const CellRuns& b) {
  CellRuns out;
  out.runs.reserve(a.runs.size() * b.runs.size());
  for (const auto& x : a.runs)
    for (const auto& y : b.runs) out.runs.emplace_back(x.first + y.first, x.second + y.second + 1);
  normalize(out.runs);
  return out;
}

CellRuns line_power(const CellRuns& a, unsigned k) {
  if (k == 0) throw InputError("k-fold sum needs k >= 1");
  CellRuns result, base = a;
  bool have = false;
  while (k > 0) {
    if (k & 1) {
      result = have ? line_sum(result, base) : base;
      have = true;
    }
    k >>= 1;
    if (k > 0) base = line_sum(base, base);
  }
  return result;
}

CellRuns cyclic_sum(const CellRuns& a, const CellRuns& b, long period) {
  CellRuns out;
  for (const auto& x : a.runs)
    for (const auto& y : b.runs) {
      const long len = (x.second - x.first) + (y.second - y.first) + 2;
      if (len >= period) {
        out.runs.assign(1, {0, period - 1});
        return out;
      }
      const long s = ((x.first + y.first) % period + period) % period;
      const long e = s + len - 1;
      if (e < period) {
        out.runs.emplace_back(s, e);
      } else {
        out.runs.emplace_back(s, period - 1);
        out.runs.emplace_back(0, e - period);
      }
    }
  normalize(out.runs);
  return out;
}

CellRuns cyclic_power(const CellRuns& a, unsigned k, long period) {
  if (k == 0) throw InputError("k-fold sum needs k >= 1");
  CellRuns result, base = a;
  bool have = false;
  auto full = [&](const CellRuns& r) { return r.covers(0, period - 1); };
  while (k > 0) {
    if (k & 1) {
      result = have ? cyclic_sum(result, base, period) : base;
      have = true;
      if (full(result)) return result;
    }
    k >>= 1;
    if (k > 0) base = cyclic_sum(base, base, period);
  }
  return result;
}

// ---------------------------------------------------------------- torus sums

namespace {

void set_cyclic(std::uint64_t* row, long s, long e, long n) {
  auto fill = [&](long lo, long hi) {
    for (long i = lo; i <= hi;) {
      if (i % 64 == 0 && i + 63 <= hi) {
        row[i / 64] = ~std::uint64_t(0);
        i += 64;
      } else {
        row[i / 64] |= std::uint64_t(1) << (i % 64);
        ++i;
      }
    }
  };
  if (e - s + 1 >= n) {
    fill(0, n - 1);
  } else if (e < n) {
    fill(s, e);
  } else {
    fill(s, n - 1);
    fill(0, e - n);
  }
}

}  // namespace

GridSet torus_sum(const GridSet& a, const GridSet& b) {
  if (a.dim() != b.dim() || a.resolution() != b.resolution())
    throw InputError("torus_sum needs equal dimension and resolution");
  const std::size_t d = a.dim(), n = a.resolution(), rows = a.rows(), wpr = a.words_per_row();
  GridSet out(d, n);
  const std::size_t od = d - 1;  // axes indexing rows

  std::vector<CellRuns> ra(rows), rb(rows);
  std::vector<std::size_t> na, nb;
  for (std::size_t r = 0; r < rows; ++r) {
    if (a.row_count(r)) {
      ra[r] = CellRuns::from_row(a, r);
      na.push_back(r);
    }
    if (b.row_count(r)) {
      rb[r] = CellRuns::from_row(b, r);
      nb.push_back(r);
    }
  }
  std::vector<char> full(rows, 0);
  std::size_t full_rows = 0;
  auto mark = [&](std::size_t r) {
    if (!full[r] && out.row_count(r) == n) {
      full[r] = 1;
      ++full_rows;
    }
  };
  std::vector<std::size_t> ca(od), cb(od), ct(od);
  for (std::size_t x : na) {
    std::size_t rest = x;
    for (std::size_t j = 0; j < od; ++j) {
      ca[j] = rest % n;
      rest /= n;
    }
    for (std::size_t y : nb) {
      if (full_rows == rows) return out;
      rest = y;
      for (std::size_t j = 0; j < od; ++j) {
        cb[j] = rest % n;
        rest /= n;
      }
      // Target rows: ca + cb + delta, delta in {0,1}^(d-1).
      std::vector<std::size_t> targets;
      for (std::size_t mask = 0; mask < (std::size_t(1) << od); ++mask) {
        std::size_t t = 0;
        for (std::size_t j = od; j-- > 0;) t = t * n + (ca[j] + cb[j] + ((mask >> j) & 1)) % n;
        if (!full[t]) targets.push_back(t);
      }
      if (targets.empty()) continue;
      const CellRuns s = cyclic_sum(ra[x], rb[y], static_cast<long>(n));
      for (std::size_t t : targets) {
        for (const auto& run : s.runs)
          set_cyclic(out.words().data() + t * wpr, run.first, run.second, static_cast<long>(n));
        mark(t);
      }
    }
  }
  return out;
}

GridSet torus_power(const GridSet& a, unsigned k) {
  if (k == 0) throw InputError("k-fold sum needs k >= 1");
  GridSet result, base = a;
  bool have = false;
  while (k > 0) {
    if (k & 1) {
      result = have ? torus_sum(result, base) : base;
      have = true;
      if (result.is_full()) return result;
    }
    k >>= 1;
    if (k > 0) base = torus_sum(base, base);
  }
  return result;
}

// ---------------------------------------------------------------- covering

namespace {

long ceil_inverse(const Rational& eps) { return ceil_of(1 / eps).get_si(); }

// The one-dimensional construction on a line of cells.
AxisTrace cover_line(const CellRuns& line, long n, const Rational& eps) {
  if (line.runs.empty()) throw PreconditionError("empty line");
  AxisTrace t;
  t.origin_cell = line.runs.front().first;
  CellRuns a = line;
  for (auto& r : a.runs) {
    r.first -= t.origin_cell;
    r.second -= t.origin_cell;
  }
  t.k1 = ceil_inverse(eps);
  if (!cyclic_power(a, static_cast<unsigned>(t.k1), n).covers(0, n - 1))
    throw CertificateFailure("k1-fold torus sum does not cover the circle");
  const CellRuns lifted = line_power(a, static_cast<unsigned>(t.k1 + 1));
  for (long m = 1; m <= t.k1; ++m)
    if (lifted.contains_point(m, n)) {
      t.m = m;
      break;
    }
  if (t.m == 0)
    throw PreconditionError("no integer m located in (k1+1)A at resolution " + std::to_string(n) +
                            "; refine the grid");
  t.k2 = t.m * t.k1;
  if (!cyclic_power(a, static_cast<unsigned>(t.k2), t.m * n).covers(0, t.m * n - 1))
    throw CertificateFailure("k2-fold sum does not cover R/mZ");
  t.k = t.k2 + t.k1 * (t.k1 + 1);
  return t;
}

// Cells along `axis` with the other coordinates fixed at `line`.
CellRuns extract_line(const GridSet& g, std::size_t axis, const std::vector<std::size_t>& line) {
  const std::size_t n = g.resolution();
  std::vector<std::size_t> c = line;
  CellRuns out;
  long start = -1;
  for (std::size_t i = 0; i < n; ++i) {
    c[axis] = i;
    const bool on = g.test(c);
    if (on && start < 0) start = static_cast<long>(i);
    if (!on && start >= 0) {
      out.runs.emplace_back(start, static_cast<long>(i) - 1);
      start = -1;
    }
  }
  if (start >= 0) out.runs.emplace_back(start, static_cast<long>(n) - 1);
  return out;
}

}  // namespace

CoverCertificate cover_unit_cube(const GridSet& a, const Rational& eps) {
  if (eps <= 0) throw InputError("eps must be positive");
  if (a.measure() < eps) throw PreconditionError("measure " + to_string(a.measure()) + " is below eps");
  const std::size_t d = a.dim();
  const long n = static_cast<long>(a.resolution());
  CoverCertificate cert;

  if (d == 1) {
    AxisTrace t = cover_line(CellRuns::from_row(a, 0), n, eps);
    t.axis = 0;
    t.line_measure = a.measure();
    t.b = {Rational(t.k2) + ratio(Integer(t.k * t.origin_cell), Integer(n))};
    cert.k = cert.k_prime = t.k;
    cert.k1 = t.k1;
    cert.k2 = t.k2;
    cert.m = t.m;
    cert.b = {-t.b[0]};
    cert.trace.push_back(std::move(t));
    return cert;
  }

  // One qualifying line per axis; the line runs along `axis` through the
  // lower boundaries of the fixed cells.
  for (std::size_t axis = 0; axis < d; ++axis) {
    bool found = false;
    std::vector<std::size_t> line(d, 0);
    const std::size_t lines = a.cell_count() / a.resolution();
    for (std::size_t l = 0; l < lines && !found; ++l) {
      std::size_t rest = l;
      for (std::size_t j = 0; j < d; ++j) {
        if (j == axis) {
          line[j] = 0;
          continue;
        }
        line[j] = rest % a.resolution();
        rest /= a.resolution();
      }
      const CellRuns runs = extract_line(a, axis, line);
      const Rational mu = ratio(Integer(runs.size()), Integer(n));
      if (mu < eps) continue;
      // The line's own measure plays the role of eps in one dimension.
      AxisTrace t = cover_line(runs, n, mu);
      t.axis = axis;
      t.line = line;
      t.line_measure = mu;
      cert.trace.push_back(std::move(t));
      found = true;
    }
    if (!found)
      throw PreconditionError("no line parallel to axis " + std::to_string(axis) +
                              " has measure >= eps at this resolution; refine the grid");
  }
  long kp = 0;
  for (const auto& t : cert.trace) kp = std::max(kp, t.k);
  cert.k_prime = kp;
  cert.k = static_cast<long>(d) * kp;
  const AxisTrace* top = &cert.trace.front();
  for (const auto& t : cert.trace)
    if (t.k == kp) {
      top = &t;
      break;
    }
  cert.k1 = top->k1;
  cert.k2 = top->k2;
  cert.m = top->m;

  // k'A contains the unit segment b_i + [0,1] e_i, padded by copies of the
  // line's first cell corner.
  RatVec total = zero_vec(d);
  for (auto& t : cert.trace) {
    RatVec bi(d);
    for (std::size_t j = 0; j < d; ++j) {
      if (j == t.axis)
        bi[j] = Rational(t.k2) + ratio(Integer(kp * t.origin_cell), Integer(n));
      else
        bi[j] = ratio(Integer(kp) * Integer(static_cast<unsigned long>(t.line[j])), Integer(n));
    }
    total = add(total, bi);
    t.b = std::move(bi);
  }
  cert.b = neg(total);
  return cert;
}

bool verify_cover_certificate(const GridSet& a, const CoverCertificate& cert) {
  const std::size_t d = a.dim();
  const long n = static_cast<long>(a.resolution());
  if (cert.b.size() != d || cert.k <= 0) return false;
  if (d == 1) {
    const CellRuns sum = line_power(CellRuns::from_row(a, 0), static_cast<unsigned>(cert.k));
    const Rational start = -cert.b[0] * n;
    if (start.get_den() != 1) return false;
    const long s = start.get_num().get_si();
    return sum.covers(s, s + n - 1);
  }
  if (cert.trace.size() != d || cert.k != static_cast<long>(d) * cert.k_prime) return false;
  RatVec total = zero_vec(d);
  for (const auto& t : cert.trace) {
    if (t.k > cert.k_prime || t.k <= 0 || t.line.size() != d) return false;
    const CellRuns runs = extract_line(a, t.axis, t.line);
    if (runs.runs.empty()) return false;
    // Padding point: lower corner of the first cell of the line.
    const long p = runs.runs.front().first;
    const CellRuns sum = line_power(runs, static_cast<unsigned>(t.k));
    // Segment start along the axis, in cells, after adding (k'-k) p.
    const Rational seg = t.b[t.axis] * n - (cert.k_prime - t.k) * p;
    if (seg.get_den() != 1) return false;
    const long s = seg.get_num().get_si();
    if (!sum.covers(s, s + n - 1)) return false;
    for (std::size_t j = 0; j < d; ++j)
      if (j != t.axis && t.b[j] != ratio(Integer(cert.k_prime) * Integer(static_cast<unsigned long>(t.line[j])), Integer(n)))
        return false;
    total = add(total, t.b);
  }
  return neg(total) == cert.b;
}

bool verify_cover_bruteforce(const GridSet& a, const CoverCertificate& cert, std::size_t max_cells) {
  const std::size_t d = a.dim();
  const long n = static_cast<long>(a.resolution());
  const long extent = cert.k * n;
  double total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= static_cast<double>(extent);
  if (total > static_cast<double>(max_cells)) throw BudgetExceeded("brute-force grid too large");

  // Rows along axis 0 indexed by the remaining coordinates, each in [0, extent).
  const std::size_t od = d - 1;
  std::size_t nrows = 1;
  for (std::size_t j = 0; j < od; ++j) nrows *= static_cast<std::size_t>(extent);
  using Rows = std::vector<CellRuns>;
  Rows base(nrows);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::size_t rest = r, idx = 0, mul = 1;
    for (std::size_t j = 0; j < od; ++j) {
      idx += (rest % a.resolution()) * mul;
      rest /= a.resolution();
      mul *= static_cast<std::size_t>(extent);
    }
    base[idx] = CellRuns::from_row(a, r);
  }
  auto add_rows = [&](const Rows& x, const Rows& y) {
    Rows out(nrows);
    std::vector<std::size_t> nx, ny;
    for (std::size_t i = 0; i < nrows; ++i) {
      if (!x[i].runs.empty()) nx.push_back(i);
      if (!y[i].runs.empty()) ny.push_back(i);
    }
    std::vector<std::size_t> cx(od), cy(od);
    for (std::size_t i : nx) {
      std::size_t rest = i;
      for (std::size_t j = 0; j < od; ++j) {
        cx[j] = rest % extent;
        rest /= extent;
      }
      for (std::size_t k : ny) {
        rest = k;
        for (std::size_t j = 0; j < od; ++j) {
          cy[j] = rest % extent;
          rest /= extent;
        }
        const CellRuns s = line_sum(x[i], y[k]);
        for (std::size_t mask = 0; mask < (std::size_t(1) << od); ++mask) {
          std::size_t t = 0;
          bool inside = true;
          for (std::size_t j = od; j-- > 0;) {
            const std::size_t c = cx[j] + cy[j] + ((mask >> j) & 1);
            inside = inside && c < static_cast<std::size_t>(extent);
            t = t * extent + c;
          }
          if (!inside) continue;
          auto& dst = out[t].runs;
          dst.insert(dst.end(), s.runs.begin(), s.runs.end());
        }
      }
    }
    for (auto& r : out) normalize(r.runs);
    return out;
  };
  unsigned k = static_cast<unsigned>(cert.k);
  Rows result, pw = base;
  bool have = false;
  while (k > 0) {
    if (k & 1) {
      result = have ? add_rows(result, pw) : pw;
      have = true;
    }
    k >>= 1;
    if (k > 0) pw = add_rows(pw, pw);
  }
  std::vector<long> start(d);
  for (std::size_t j = 0; j < d; ++j) {
    const Rational s = -cert.b[j] * n;
    if (s.get_den() != 1) return false;
    start[j] = s.get_num().get_si();
    if (start[j] < 0 || start[j] + n > extent) return false;
  }
  // Every row of the target window must contain [start_0, start_0 + n).
  std::vector<long> c(od, 0);
  while (true) {
    std::size_t t = 0;
    for (std::size_t j = od; j-- > 0;) t = t * extent + static_cast<std::size_t>(start[j + 1] + c[j]);
    if (!result[t].covers(start[0], start[0] + n - 1)) return false;
    std::size_t j = 0;
    while (j < od && ++c[j] == n) c[j++] = 0;
    if (j == od) break;
  }
  return true;
}

RatVec AffineMap::apply_linear(const RatVec& x) const {
  RatVec y(matrix.size(), Rational(0));
  for (std::size_t i = 0; i < matrix.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += matrix[i][j] * x[j];
  return y;
}

RatVec AffineMap::apply(const RatVec& x) const { return add(apply_linear(x), offset); }

ParallelepipedCertificate cover_parallelepiped(const GridSet& a, const Rational& eps, const AffineMap& map) {
  if (map.matrix.size() != a.dim() || map.offset.size() != a.dim()) throw InputError("affine map of the wrong size");
  for (const auto& row : map.matrix)
    if (row.size() != a.dim()) throw InputError("affine map of the wrong size");
  ParallelepipedCertificate out{cover_unit_cube(a, eps), map, {}};
  out.b = sub(add(map.apply_linear(out.unit.b), map.offset), scale(map.offset, Rational(out.unit.k)));
  return out;
}

}  // namespace meyer
