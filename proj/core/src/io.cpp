#include "meyer/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "meyer/errors.hpp"

#ifndef MEYERLIFT_VERSION
#define MEYERLIFT_VERSION "0.0.0"
#endif

namespace meyer::io {

const char* library_version() { return MEYERLIFT_VERSION; }

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError("schema error at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "/" + key, "missing");
  return *it;
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::size_t size_field(const json& j, const std::string& path, const char* key) {
  const json& v = field(j, path, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    fail(path + "/" + key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

Integer decode_integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    const Rational q = decode_rational(j, path);
    if (q.get_den() != 1) fail(path, "expected an integer");
    return q.get_num();
  }
  fail(path, "expected an integer");
}

std::string idx(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

json encode_drift(const std::optional<Rational>& x) { return x ? encode(*x) : json(nullptr); }

}  // namespace

json encode(const Rational& x) { return to_string(x); }

json encode(const RatVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(encode(x));
  return a;
}

Rational decode_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail(path, "expected a rational as a string (\"p/q\" or decimal)");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

RatVec decode_vec(const json& j, const std::string& path, std::size_t dim) {
  array_at(j, path);
  if (dim && j.size() != dim) fail(path, "expected " + std::to_string(dim) + " entries");
  RatVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(decode_rational(j[i], idx(path, i)));
  return v;
}

json encode(const Quad& x) {
  if (x.is_rational()) return json{{"rat", to_string(x.a())}};
  const Integer r = lcm(x.a().get_den(), x.b().get_den());
  const Integer p = x.a().get_num() * (r / x.a().get_den());
  const Integer q = x.b().get_num() * (r / x.b().get_den());
  return json{{"quad", {{"p", p.get_str()}, {"q", q.get_str()}, {"r", r.get_str()}, {"D", x.radicand()}}}};
}

json encode(const QuadVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(encode(x));
  return a;
}

Quad decode_quad(const json& j, const std::string& path) {
  if (!j.is_object()) return Quad(decode_rational(j, path));
  if (j.contains("rat")) return Quad(decode_rational(j["rat"], path + "/rat"));
  if (!j.contains("quad")) fail(path, "expected {\"rat\": ...} or {\"quad\": ...}");
  const std::string qp = path + "/quad";
  const json& q = j["quad"];
  const Integer p = decode_integer(field(q, qp, "p"), qp + "/p");
  const Integer b = decode_integer(field(q, qp, "q"), qp + "/q");
  const Integer r = q.contains("r") ? decode_integer(q["r"], qp + "/r") : Integer(1);
  const Integer d = decode_integer(field(q, qp, "D"), qp + "/D");
  if (r == 0) fail(qp + "/r", "zero denominator");
  if (d <= 0 || !d.fits_slong_p()) fail(qp + "/D", "radicand must be a positive machine integer");
  return Quad(ratio(p, r), ratio(b, r), d.get_si());
}

QuadVec decode_quad_vec(const json& j, const std::string& path, std::size_t dim) {
  array_at(j, path);
  if (dim && j.size() != dim) fail(path, "expected " + std::to_string(dim) + " entries");
  QuadVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(decode_quad(j[i], idx(path, i)));
  return v;
}

json encode(const Box& b) { return json{{"lo", encode(b.lo)}, {"hi", encode(b.hi)}}; }

Box decode_box(const json& j, const std::string& path) {
  Box b;
  b.lo = decode_vec(field(j, path, "lo"), path + "/lo");
  b.hi = decode_vec(field(j, path, "hi"), path + "/hi", b.lo.size());
  for (std::size_t i = 0; i < b.lo.size(); ++i)
    if (b.lo[i] > b.hi[i]) fail(path, "lo exceeds hi on axis " + std::to_string(i));
  return b;
}

json encode(const PointPatch& p) {
  json pts = json::array();
  for (const auto& x : p.points()) pts.push_back(encode(x));
  return json{{"dim", p.dim()}, {"region", encode(p.region())}, {"points", pts}};
}

PointPatch decode_patch(const json& j) {
  const std::size_t dim = size_field(j, "", "dim");
  if (dim == 0) fail("/dim", "dimension must be positive");
  const Box region = decode_box(field(j, "", "region"), "/region");
  if (region.dim() != dim) fail("/region", "dimension differs from dim");
  const json& pts = array_at(field(j, "", "points"), "/points");
  std::vector<RatVec> v;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    v.push_back(decode_vec(pts[i], idx("/points", i), dim));
    if (!region.contains(v.back())) fail(idx("/points", i), "point lies outside the region");
  }
  return PointPatch(dim, std::move(v), region);
}

json encode(const FiniteSet& s) {
  json pts = json::array();
  for (const auto& x : s) pts.push_back(encode(x));
  return json{{"dim", s.dim()}, {"points", pts}};
}

FiniteSet decode_set(const json& j) {
  const std::size_t dim = size_field(j, "", "dim");
  if (dim == 0) fail("/dim", "dimension must be positive");
  const json& pts = array_at(field(j, "", "points"), "/points");
  std::vector<RatVec> v;
  for (std::size_t i = 0; i < pts.size(); ++i) v.push_back(decode_vec(pts[i], idx("/points", i), dim));
  return FiniteSet(dim, std::move(v));
}

json encode(const Gap& g) {
  json steps = json::array();
  for (const auto& s : g.steps()) steps.push_back(encode(s));
  return json{{"steps", steps}, {"lengths", g.lengths()}, {"base", encode(g.base())}, {"symmetric", g.symmetric()}};
}

Gap decode_gap(const json& j, const std::string& path) {
  const RatVec base = decode_vec(field(j, path, "base"), path + "/base");
  const json& steps = array_at(field(j, path, "steps"), path + "/steps");
  const json& lengths = array_at(field(j, path, "lengths"), path + "/lengths");
  if (steps.size() != lengths.size()) fail(path + "/lengths", "one length per step expected");
  std::vector<RatVec> s;
  std::vector<long> l;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    s.push_back(decode_vec(steps[i], idx(path + "/steps", i), base.size()));
    if (!lengths[i].is_number_integer() || lengths[i].get<long>() < 0)
      fail(idx(path + "/lengths", i), "expected a nonnegative integer");
    l.push_back(lengths[i].get<long>());
  }
  const json& sym = field(j, path, "symmetric");
  if (!sym.is_boolean()) fail(path + "/symmetric", "expected a boolean");
  try {
    return Gap(std::move(s), std::move(l), base, sym.get<bool>());
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

json encode(const Scheme& s) {
  json gens = json::array(), window = json::array(), shifts = json::array();
  for (const auto& g : s.generators) gens.push_back(encode(g));
  for (const auto& b : s.window) window.push_back({{"lo", encode(b.lo)}, {"hi", encode(b.hi)}});
  for (const auto& x : s.shifts) shifts.push_back(encode(x));
  return json{{"d", s.d}, {"e", s.e}, {"generators", gens}, {"window", window}, {"shifts", shifts}};
}

Scheme decode_scheme(const json& j) {
  Scheme s;
  s.d = size_field(j, "", "d");
  s.e = size_field(j, "", "e");
  if (s.d == 0) fail("/d", "d must be positive");
  const json& gens = array_at(field(j, "", "generators"), "/generators");
  for (std::size_t i = 0; i < gens.size(); ++i)
    s.generators.push_back(decode_quad_vec(gens[i], idx("/generators", i), s.d + s.e));
  if (j.contains("window")) {
    const json& w = array_at(j["window"], "/window");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::string p = idx("/window", i);
      QuadBox b;
      b.lo = decode_quad_vec(field(w[i], p, "lo"), p + "/lo", s.e);
      b.hi = decode_quad_vec(field(w[i], p, "hi"), p + "/hi", s.e);
      if (s.e == 0 && !w[i]["lo"].empty()) fail(p, "e = 0 windows are empty boxes");
      for (std::size_t k = 0; k < s.e; ++k)
        if (b.lo[k] > b.hi[k]) fail(p, "lo exceeds hi on axis " + std::to_string(k));
      s.window.push_back(std::move(b));
    }
  }
  if (s.window.empty()) {
    if (s.e != 0) fail("/window", "at least one box is required when e > 0");
    s.window.push_back(QuadBox{});
  }
  if (j.contains("shifts")) {
    const json& sh = array_at(j["shifts"], "/shifts");
    for (std::size_t i = 0; i < sh.size(); ++i) s.shifts.push_back(decode_quad_vec(sh[i], idx("/shifts", i), s.d));
  }
  try {
    s.radicand();
  } catch (const InputError& e) {
    fail("", e.what());
  }
  return s;
}

json encode(const GridSet& g) {
  json rle = json::array();
  bool state = false;
  std::size_t run = 0;
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (g.test_flat(i) != state) {
      rle.push_back(run);
      run = 0;
      state = !state;
    }
    ++run;
  }
  rle.push_back(run);
  return json{{"dim", g.dim()}, {"resolution", g.resolution()}, {"rle", rle}};
}

GridSet decode_grid(const json& j) {
  const std::size_t dim = size_field(j, "", "dim");
  const std::size_t n = size_field(j, "", "resolution");
  if (dim == 0 || dim > 3) fail("/dim", "grid dimension must be 1, 2 or 3");
  if (n == 0 || (n & (n - 1))) fail("/resolution", "resolution must be a power of two");
  GridSet g(dim, n);
  if (j.contains("rle")) {
    const json& rle = array_at(j["rle"], "/rle");
    std::size_t pos = 0;
    bool state = false;
    for (std::size_t i = 0; i < rle.size(); ++i) {
      if (!rle[i].is_number_unsigned()) fail(idx("/rle", i), "expected a nonnegative integer");
      const std::size_t len = rle[i].get<std::size_t>();
      if (pos + len > g.cell_count()) fail(idx("/rle", i), "runs exceed the cell count");
      if (state)
        for (std::size_t c = pos; c < pos + len; ++c) g.set_flat(c);
      pos += len;
      state = !state;
    }
    if (pos != g.cell_count()) fail("/rle", "runs do not add up to the cell count");
  } else {
    const json& cells = array_at(field(j, "", "cells"), "/cells");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string p = idx("/cells", i);
      array_at(cells[i], p);
      if (cells[i].size() != dim) fail(p, "expected " + std::to_string(dim) + " indices");
      std::vector<std::size_t> c;
      for (std::size_t k = 0; k < dim; ++k) {
        if (!cells[i][k].is_number_unsigned() || cells[i][k].get<std::size_t>() >= n)
          fail(idx(p, k), "cell index out of range");
        c.push_back(cells[i][k].get<std::size_t>());
      }
      g.set(c);
    }
  }
  return g;
}

json encode(const DensityReport& r) {
  json rows = json::array();
  for (const auto& row : r.per_window_counts)
    rows.push_back({{"R", encode(row.radius)}, {"center", encode(row.center)}, {"count", row.count},
                    {"density", encode(row.density)}});
  json used = json::array(), skipped = json::array();
  for (const auto& x : r.window_radii) used.push_back(encode(x));
  for (const auto& x : r.skipped_radii) skipped.push_back(encode(x));
  return json{{"upper_estimate", encode(r.upper_estimate)}, {"lower_estimate", encode(r.lower_estimate)},
              {"window_radii", used}, {"skipped_radii", skipped}, {"warning", r.warning()},
              {"per_window_counts", rows}};
}

std::string density_csv(const DensityReport& r) {
  std::ostringstream out;
  out << "R,center,count,density\n";
  for (const auto& row : r.per_window_counts) {
    out << to_string(row.radius) << ",\"";
    for (std::size_t i = 0; i < row.center.size(); ++i) out << (i ? " " : "") << to_string(row.center[i]);
    out << "\"," << row.count << "," << to_string(row.density) << "\n";
  }
  return out.str();
}

json encode(const CoverResult& r) {
  return json{{"success", r.success},
              {"q", encode(r.q)},
              {"f", encode(r.f)},
              {"rank", r.q.rank()},
              {"doubling", encode(r.doubling)},
              {"cert_q_in_2a_minus_2a", r.cert_q_in_2a2a},
              {"cert_a_in_f_plus_q", r.cert_a_in_fq},
              {"size_ratio", encode(r.size_ratio)},
              {"dilation", r.dilation.get_str()},
              {"stats",
               {{"candidates", r.stats.candidates},
                {"lookups", r.stats.lookups},
                {"ranks_tried", r.stats.ranks_tried},
                {"best_f", r.stats.best_f},
                {"budget_exhausted", r.stats.budget_exhausted}}}};
}

json encode(const CoverCertificate& c) {
  json trace = json::array();
  for (const auto& t : c.trace)
    trace.push_back({{"axis", t.axis}, {"line", t.line}, {"line_measure", encode(t.line_measure)}, {"k1", t.k1},
                     {"m", t.m}, {"k2", t.k2}, {"k", t.k}, {"origin_cell", t.origin_cell}, {"b", encode(t.b)}});
  return json{{"k", c.k},           {"b", encode(c.b)}, {"k1", c.k1},      {"k2", c.k2},
              {"m", c.m},           {"k_prime", c.k_prime}, {"trace", trace}};
}

json encode(const ParallelepipedCertificate& c) {
  json m = json::array();
  for (const auto& row : c.map.matrix) m.push_back(encode(row));
  return json{{"unit", encode(c.unit)}, {"matrix", m}, {"offset", encode(c.map.offset)}, {"b", encode(c.b)}};
}

json encode(const PlunneckeReport& r) {
  return json{{"K", encode(r.k_constant)}, {"lhs", r.lhs.get_str()}, {"rhs", encode(r.rhs)}, {"holds", r.holds}};
}

json encode(const RuzsaReport& r) {
  return json{{"lhs", r.lhs.get_str()}, {"rhs", r.rhs.get_str()}, {"holds", r.holds}};
}

json encode(const DoublingReport& r) {
  return json{{"sumset_size", r.sumset_size.get_str()}, {"bound", r.bound.get_str()}, {"proper", r.proper},
              {"holds", r.holds}};
}

json encode(const ConditionReport& r) {
  json j{{"discrete", r.discrete}, {"lattice", r.lattice}, {"injective", r.injective}, {"dense", r.dense},
         {"z_rank", r.z_rank},     {"r_rank", r.r_rank}};
  if (r.kernel_witness) j["kernel_witness"] = encode(*r.kernel_witness);
  if (r.dual_witness) j["dual_witness"] = encode(*r.dual_witness);
  return j;
}

json encode(const ReductionStep& s) {
  json j{{"branch", to_string(s.branch)},
         {"before", encode(s.before)},
         {"after", encode(s.after)},
         {"containment_checked", s.containment_checked},
         {"containment_ok", s.containment_ok},
         {"probe_points", s.probe_points}};
  json u = json::array();
  for (const auto& v : s.u_basis) u.push_back(encode(v));
  j["u_basis"] = u;
  switch (s.branch) {
    case Branch::NotLattice: {
      json v0 = json::array();
      for (const auto& v : s.v0_basis) v0.push_back(encode(v));
      j["v0_basis"] = v0;
      break;
    }
    case Branch::NotInjective:
      j["gamma"] = encode(s.gamma);
      break;
    case Branch::NotDense: {
      j["gamma"] = encode(s.gamma);
      j["v"] = encode(s.v);
      j["n_max"] = s.n_max;
      j["slices"] = s.slices;
      json e = json::array();
      for (const auto& x : s.e_shifts) e.push_back(encode(x));
      j["E"] = e;
      break;
    }
  }
  return j;
}

json encode(const ReduceResult& r) {
  json steps = json::array();
  for (const auto& s : r.steps) steps.push_back(encode(s));
  return json{{"scheme", encode(r.scheme)},
              {"steps", steps},
              {"final_conditions", encode(r.final_report)},
              {"probe_covering_radius", encode(r.probe_covering_radius)}};
}

json encode(const GeneratedPatch& g) {
  json amb = json::array();
  for (const auto& x : g.ambiguous) amb.push_back(encode(x));
  json j = encode(g.patch);
  j["ambiguous"] = amb;
  j["radicand"] = g.radicand;
  j["sqrt_stand_in"] = encode(g.sqrt_stand_in);
  j["error_bound"] = encode(g.error_bound);
  return j;
}

json encode(const DoublingProfile& p) {
  json rows = json::array();
  for (const auto& r : p.rows)
    rows.push_back({{"N", encode(r.n)}, {"size", r.size}, {"difference_size", r.difference_size},
                    {"ratio", encode(r.ratio)}});
  return json{{"rows", rows},
              {"upper_difference_density", encode(p.upper_difference_density)},
              {"lower_density", encode(p.lower_density)},
              {"bound", p.bound ? encode(*p.bound) : json(nullptr)},
              {"within_bound", p.within_bound},
              {"small_doubling", p.small_doubling}};
}

json encode(const LiftCertificate& c) {
  json basis = json::array();
  for (const auto& v : c.lambda.vectors) basis.push_back(encode(v));
  json witnesses = json::array();
  for (const auto& w : c.containment.witnesses)
    witnesses.push_back({{"x", encode(w.x)}, {"y", encode(w.y)}, {"n", w.n}, {"internal", encode(w.internal)}});
  const NormalizedCover& nc = c.normalized;
  return json{{"N", encode(c.n_value)},
              {"k_doubling", encode(c.k_doubling)},
              {"cover", encode(c.cover)},
              {"f_prime", encode(nc.f_prime)},
              {"k_cover", c.k_cover},
              {"normalization",
               {{"path", to_string(nc.path)},
                {"fell_back", nc.fell_back},
                {"note", nc.note},
                {"scale", encode(nc.scale)},
                {"k1", nc.k1},
                {"raster_measure", encode(nc.raster_measure)},
                {"proof_certified", nc.proof_certified}}},
              {"lambda_basis", basis},
              {"e", c.lambda.e},
              {"dropped_steps", c.lambda.dropped},
              {"r_discrete", encode(c.discreteness.r)},
              {"r_certified", c.discreteness.certified},
              {"shortest_coefficients", c.discreteness.shortest},
              {"core", encode(c.core)},
              {"containment_ok", c.containment_ok},
              {"offending", c.containment.offending ? encode(*c.containment.offending) : json(nullptr)},
              {"witnesses", witnesses}};
}

json encode(const InternalDimensionReport& r) {
  return json{{"e", r.e}, {"K", encode(r.k)}, {"d", r.d}, {"d_log2_K", r.d_log2_k}};
}

json encode(const StabilizationReport& r) {
  json schedule = json::array(), certs = json::array(), bd = json::array(), fd = json::array();
  for (const auto& n : r.schedule) schedule.push_back(encode(n));
  for (const auto& c : r.certificates) certs.push_back(encode(c));
  for (const auto& x : r.basis_drift) bd.push_back(encode_drift(x));
  for (const auto& x : r.f_prime_drift) fd.push_back(encode_drift(x));
  return json{{"schedule", schedule},
              {"verdict", to_string(r.verdict)},
              {"tolerance", encode(r.tolerance)},
              {"failures", r.failures},
              {"basis_drift", bd},
              {"f_prime_drift", fd},
              {"doubling_profile", encode(r.doubling)},
              {"certificates", certs},
              {"final_scheme", r.final_scheme ? encode(*r.final_scheme) : json(nullptr)},
              {"final_cross_check", r.final_cross_check},
              {"final_core_points", r.final_core_points},
              {"internal_dimension", encode(internal_dimension_report(r))}};
}

std::string render_svg(const PointPatch& p, const SvgOptions& options) {
  if (p.dim() > 2) throw InputError("only 1-D and 2-D patches can be rendered");
  const Box& region = p.region();
  const double margin = 20;
  const double w = options.width, h = p.dim() == 1 ? 120 : options.height;
  auto span = [&](std::size_t i) {
    const double s = Rational(region.hi[i] - region.lo[i]).get_d();
    return s > 0 ? s : 1.0;
  };
  const double sx = (w - 2 * margin) / span(0);
  const double sy = p.dim() == 2 ? (h - 2 * margin) / span(1) : sx;
  double side = 4;
  if (p.size() >= 2) side = std::max(1.0, discreteness_radius(p).get_d() * std::min(sx, sy));

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << " " << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty())
    out << "<text x=\"" << margin << "\" y=\"14\" font-family=\"sans-serif\" font-size=\"12\">" << options.title
        << "</text>\n";
  if (p.dim() == 1)
    out << "<line x1=\"" << margin << "\" y1=\"" << h / 2 << "\" x2=\"" << w - margin << "\" y2=\"" << h / 2
        << "\" stroke=\"#999\"/>\n";
  for (const auto& x : p.points()) {
    const double cx = margin + Rational(x[0] - region.lo[0]).get_d() * sx;
    const double cy = p.dim() == 2 ? h - margin - Rational(x[1] - region.lo[1]).get_d() * sy : h / 2;
    out << "<rect x=\"" << cx - side / 2 << "\" y=\"" << cy - side / 2 << "\" width=\"" << side << "\" height=\""
        << side << "\" fill=\"#1f4e79\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move output into place at " + path + ": " + ec.message());
  }
}

}  // namespace meyer::io
