// meyerlift: command-line front end.
// Exit codes: 0 ok, 2 certificate failure, 3 budget exhausted, 4 input error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "meyer/errors.hpp"
#include "meyer/io.hpp"

using namespace meyer;
using io::json;

namespace {

constexpr int kOk = 0;
constexpr int kCertificate = 2;
constexpr int kBudget = 3;
constexpr int kInput = 4;

std::string sha256(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

// "lo,hi" for every axis or "lo0,hi0,lo1,hi1,...".
Box parse_region(const std::string& text, std::size_t d) {
  const auto v = parse_list(text);
  Box b;
  if (v.size() == 2) {
    b.lo.assign(d, v[0]);
    b.hi.assign(d, v[1]);
  } else if (v.size() == 2 * d) {
    for (std::size_t i = 0; i < d; ++i) {
      b.lo.push_back(v[2 * i]);
      b.hi.push_back(v[2 * i + 1]);
    }
  } else {
    throw InputError("--region expects lo,hi or one lo,hi pair per axis");
  }
  for (std::size_t i = 0; i < d; ++i)
    if (b.lo[i] > b.hi[i]) throw InputError("--region has lo > hi");
  return b;
}

struct Run {
  std::vector<std::string> argv;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, hash
  std::vector<std::pair<std::string, std::string>> outputs;  // path, hash
  std::string out = "-";
  std::string manifest;
  std::uint64_t seed = 0;
  std::string budget_text;

  std::uint64_t budget() const {
    if (budget_text.empty()) return default_budget();
    const Rational v = parse_rational(budget_text);
    if (v < 1) throw InputError("--budget must be at least 1");
    return static_cast<std::uint64_t>(floor_of(v).get_d());
  }

  json load(const std::string& path) {
    const std::string text = slurp(path);
    inputs.emplace_back(path, sha256(text));
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError("malformed JSON in " + path + ": " + e.what());
    }
  }

  void write(const std::string& path, const std::string& content) {
    if (path == "-") {
      std::cout << content;
      return;
    }
    io::write_file_atomic(path, content);
    outputs.emplace_back(path, sha256(content));
  }

  void emit(const json& j) { write(out, j.dump(2) + "\n"); }
};

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const BudgetExceeded*>(&e)) return kBudget;
  if (dynamic_cast<const CertificateFailure*>(&e)) return kCertificate;
  if (dynamic_cast<const InputError*>(&e)) return kInput;
  if (dynamic_cast<const PreconditionError*>(&e)) return kInput;
  return kCertificate;
}

const char* exit_name(int code) {
  switch (code) {
    case kOk: return "ok";
    case kCertificate: return "certificate-failure";
    case kBudget: return "budget-exhausted";
    default: return "input-error";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meyerlift: Meyer sets, Freiman covers and cut-and-project lifts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::library_version());
  Run run;
  for (int i = 0; i < argc; ++i) run.argv.emplace_back(argv[i]);

  auto common = [&](CLI::App* sub) {
    sub->add_option("-o,--out", run.out, "Output file (- for stdout)");
    sub->add_option("--manifest", run.manifest, "Write a run manifest here");
    sub->add_option("--seed", run.seed, "Seed recorded in the manifest");
    sub->add_option("--budget", run.budget_text, "Enumeration budget (default MEYERLIFT_BUDGET or 1e7)");
  };

  // generate
  std::string scheme_path, region_text, svg_path, precision_text = "1e30";
  bool interval = false;
  auto* gen = app.add_subcommand("generate", "Patch of a shift-cut-and-project set");
  gen->add_option("--scheme", scheme_path, "Scheme JSON")->required();
  gen->add_option("--region", region_text, "lo,hi (all axes) or lo0,hi0,lo1,hi1")->required();
  gen->add_option("--svg", svg_path, "Also render the patch");
  gen->add_option("--precision", precision_text, "sqrt(D) stand-in precision, e.g. 1e30");
  gen->add_flag("--interval", interval, "Decide window membership with certified intervals");
  common(gen);

  // analyze
  std::string input_path, csv_path, radii_text, core_inset_text = "5";
  std::size_t max_f = 16;
  auto* ana = app.add_subcommand("analyze", "Delone diagnostics of a patch");
  ana->add_option("--input", input_path, "Patch JSON")->required();
  ana->add_option("--core-inset", core_inset_text, "Core = region inset by this margin");
  ana->add_option("--radii", radii_text, "Density radii, comma separated (default region/8, region/4)");
  ana->add_option("--max-f", max_f, "Largest F tried for condition (iii)");
  ana->add_option("--csv", csv_path, "Density report as CSV");
  common(ana);

  // sumset
  std::string op, a_path, b_path, c_path;
  unsigned k_fold = 2, l_fold = 0;
  auto* sum = app.add_subcommand("sumset", "Exact sumsets and inequality checks");
  sum->add_option("--op", op, "sum | diff | iter | plunnecke | ruzsa")
      ->required()
      ->check(CLI::IsMember({"sum", "diff", "iter", "plunnecke", "ruzsa"}));
  sum->add_option("--a,--input", a_path, "Set A")->required();
  sum->add_option("--b", b_path, "Set B");
  sum->add_option("--c", c_path, "Set C (ruzsa)");
  sum->add_option("-k", k_fold, "k for kA - lA");
  sum->add_option("-l", l_fold, "l for kA - lA");
  common(sum);

  // cover
  CoverOptions cover_opts;
  auto* cov = app.add_subcommand("cover", "Freiman cover A ⊆ F + Q");
  cov->add_option("--input", input_path, "Finite set or patch JSON")->required();
  cov->add_option("--max-rank", cover_opts.max_rank, "Largest GAP rank");
  cov->add_option("--max-f", cover_opts.max_f, "Largest |F|");
  cov->add_option("--pool", cover_opts.pool, "Candidate steps combined for rank >= 2");
  common(cov);

  // toruscover
  std::string eps_text;
  bool bruteforce = false;
  auto* tor = app.add_subcommand("toruscover", "Constructive covering kA + b ⊇ [0,1]^d");
  tor->add_option("--input", input_path, "GridSet JSON")->required();
  tor->add_option("--eps", eps_text, "Measure lower bound")->required();
  tor->add_flag("--bruteforce", bruteforce, "Also run the full-grid oracle");
  common(tor);

  // reduce
  std::string probe_text = "30";
  bool no_density = false;
  auto* red = app.add_subcommand("reduce", "Reduce a scheme to a lattice, injective, dense one");
  red->add_option("--scheme", scheme_path, "Scheme JSON")->required();
  red->add_option("--probe-radius", probe_text, "Containment probe cube radius");
  red->add_flag("--no-density-check", no_density, "Skip the relative-density precondition");
  common(red);

  // lift
  std::string schedule_text, path_text = "search", tolerance_text = "0";
  LiftOptions lift_opts;
  auto* lif = app.add_subcommand("lift", "Lift a patch to a cut-and-project description");
  lif->add_option("--input", input_path, "Patch JSON")->required();
  lif->add_option("--schedule", schedule_text, "Increasing radii, comma separated")->required();
  lif->add_option("--core-inset", core_inset_text, "Containment core = B(0, N - inset)");
  lif->add_option("--max-rank", lift_opts.cover.max_rank, "Largest GAP rank");
  lif->add_option("--max-f", lift_opts.cover.max_f, "Largest |F|");
  lif->add_option("--k-max", lift_opts.normalize.k_max, "Largest k tried on the search path");
  lif->add_option("--path", path_text, "search | proof")->check(CLI::IsMember({"search", "proof"}));
  lif->add_option("--tolerance", tolerance_text, "Drift tolerance");
  common(lif);

  // verify
  std::string patch_path;
  auto* ver = app.add_subcommand("verify", "Check that a scheme regenerates a patch");
  ver->add_option("--scheme", scheme_path, "Scheme JSON")->required();
  ver->add_option("--patch", patch_path, "Patch JSON")->required();
  ver->add_option("--core-inset", core_inset_text, "Compare on the region inset by this margin");
  common(ver);

  // render
  std::string diff_svg;
  auto* ren = app.add_subcommand("render", "SVG of a patch and optionally its difference set");
  ren->add_option("--input", input_path, "Patch JSON")->required();
  ren->add_option("--difference", diff_svg, "Write the difference patch here");
  common(ren);

  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  std::string message;
  try {
    const std::uint64_t budget = run.budget();
    if (gen->parsed()) {
      const Scheme s = io::decode_scheme(run.load(scheme_path));
      GenerateOptions go;
      go.budget = budget;
      go.exact_window = !interval;
      go.precision = floor_of(parse_rational(precision_text));
      if (go.precision < 1) throw InputError("--precision must be at least 1");
      const GeneratedPatch g = generate(s, parse_region(region_text, s.d), go);
      run.emit(io::encode(g));
      if (!svg_path.empty()) run.write(svg_path, io::render_svg(g.patch, {.title = "generated patch"}));
    } else if (ana->parsed()) {
      const PointPatch p = io::decode_patch(run.load(input_path));
      const Box core = p.region().inset(parse_rational(core_inset_text));
      json out{{"size", p.size()}};
      if (p.size() >= 2) out["discreteness_radius"] = io::encode(discreteness_radius(p));
      out["covering_radius"] = io::encode(covering_radius(p, core));
      std::vector<Rational> radii;
      if (!radii_text.empty()) {
        radii = parse_list(radii_text);
      } else {
        const Rational side = p.region().hi[0] - p.region().lo[0];
        radii = {side / 8, side / 4};
      }
      const DensityReport dr = density_report(p, radii);
      out["density"] = io::encode(dr);
      const FiniteSet s = p.to_set();
      const PointPatch diff(p.dim(), difference(s, s).elements(), p.region().expand(p.region().hi[0] - p.region().lo[0]));
      const PointPatch diff_core = diff.restricted(core);
      if (diff_core.size() >= 2) out["difference_discreteness_radius"] = io::encode(discreteness_radius(diff_core));
      if (auto f = check_condition_iii(p, core, max_f)) out["condition_iii_f"] = io::encode(*f);
      else out["condition_iii_f"] = nullptr;
      run.emit(out);
      if (!csv_path.empty()) run.write(csv_path, io::density_csv(dr));
    } else if (sum->parsed()) {
      const FiniteSet a = io::decode_set(run.load(a_path));
      auto need = [&](const std::string& path, const char* name) {
        if (path.empty()) throw InputError(std::string("--op ") + op + " needs --" + name);
        return io::decode_set(run.load(path));
      };
      if (op == "sum") run.emit(io::encode(meyer::sum(a, need(b_path, "b"))));
      else if (op == "diff") run.emit(io::encode(difference(a, need(b_path, "b"))));
      else if (op == "iter") {
        const IteratedSet it = iterated(a, k_fold, l_fold);
        json j = io::encode(it.set);
        j["zero_fold"] = it.zero_fold;
        run.emit(j);
      } else if (op == "plunnecke") {
        const FiniteSet b = b_path.empty() ? a : need(b_path, "b");
        const PlunneckeReport r = verify_plunnecke(a, b, k_fold, l_fold);
        run.emit(io::encode(r));
        if (!r.holds) code = kCertificate;
      } else {
        const RuzsaReport r = verify_ruzsa_triangle(a, need(b_path, "b"), need(c_path, "c"));
        run.emit(io::encode(r));
        if (!r.holds) code = kCertificate;
      }
    } else if (cov->parsed()) {
      const json j = run.load(input_path);
      const FiniteSet a = j.contains("region") ? io::decode_patch(j).to_set() : io::decode_set(j);
      cover_opts.budget = budget;
      const CoverResult r = find_cover(a, cover_opts);
      run.emit(io::encode(r));
      if (!r.success) code = kCertificate;
    } else if (tor->parsed()) {
      const GridSet g = io::decode_grid(run.load(input_path));
      const CoverCertificate c = cover_unit_cube(g, parse_rational(eps_text));
      json out{{"certificate", io::encode(c)}, {"verified", verify_cover_certificate(g, c)}};
      if (bruteforce) out["bruteforce"] = verify_cover_bruteforce(g, c);
      run.emit(out);
      if (!out["verified"].get<bool>() || (bruteforce && !out["bruteforce"].get<bool>())) code = kCertificate;
    } else if (red->parsed()) {
      const Scheme s = io::decode_scheme(run.load(scheme_path));
      ReduceOptions ro;
      ro.probe_radius = parse_rational(probe_text);
      ro.budget = budget;
      ro.check_density = !no_density;
      run.emit(io::encode(reduce(s, ro)));
    } else if (lif->parsed()) {
      const PointPatch p = io::decode_patch(run.load(input_path));
      lift_opts.core_inset = parse_rational(core_inset_text);
      lift_opts.tolerance = parse_rational(tolerance_text);
      lift_opts.budget = budget;
      lift_opts.normalize.path = path_text == "proof" ? CoverPath::Proof : CoverPath::Search;
      const StabilizationReport r = stabilize(p, parse_list(schedule_text), lift_opts);
      run.emit(io::encode(r));
      if (r.verdict != Verdict::Stabilized || !r.final_cross_check) code = kCertificate;
    } else if (ver->parsed()) {
      const Scheme s = io::decode_scheme(run.load(scheme_path));
      const PointPatch p = io::decode_patch(run.load(patch_path));
      if (p.dim() != s.d) throw InputError("patch and scheme dimensions differ");
      const Box core = p.region().inset(parse_rational(core_inset_text));
      GenerateOptions go;
      go.budget = budget;
      const GeneratedPatch g = generate(s, core, go);
      const FiniteSet want = p.restricted(core).to_set(), got = g.patch.to_set();
      json missing = json::array(), extra = json::array();
      for (const auto& x : want)
        if (!got.contains(x) && missing.size() < 20) missing.push_back(io::encode(x));
      for (const auto& x : got)
        if (!want.contains(x) && extra.size() < 20) extra.push_back(io::encode(x));
      const bool ok = missing.empty() && extra.empty() && g.ambiguous.empty();
      run.emit(json{{"match", ok},
                    {"core", io::encode(core)},
                    {"patch_points", want.size()},
                    {"generated_points", got.size()},
                    {"ambiguous", g.ambiguous.size()},
                    {"missing", missing},
                    {"extra", extra}});
      if (!ok) code = kCertificate;
    } else if (ren->parsed()) {
      const PointPatch p = io::decode_patch(run.load(input_path));
      run.write(run.out, io::render_svg(p, {.title = input_path}));
      if (!diff_svg.empty()) {
        const FiniteSet s = p.to_set();
        Box region = p.region();
        for (std::size_t i = 0; i < region.dim(); ++i) {
          const Rational w = region.hi[i] - region.lo[i];
          region.lo[i] = -w;
          region.hi[i] = w;
        }
        const PointPatch d(p.dim(), difference(s, s).elements(), region);
        run.write(diff_svg, io::render_svg(d, {.title = "difference set"}));
      }
    }
  } catch (const std::exception& e) {
    code = exit_code_for(e);
    message = e.what();
    std::cerr << "meyerlift: " << exit_name(code) << ": " << message << "\n";
  }

  if (!run.manifest.empty()) {
    json inputs = json::array(), outputs = json::array();
    for (const auto& [p, h] : run.inputs) inputs.push_back({{"path", p}, {"sha256", h}});
    for (const auto& [p, h] : run.outputs) outputs.push_back({{"path", p}, {"sha256", h}});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const json m{{"command_line", run.argv}, {"inputs", inputs},     {"library_version", io::library_version()},
                 {"seed", run.seed},         {"wall_time_s", secs}, {"outputs", outputs},
                 {"exit_code", code},        {"status", exit_name(code)}, {"message", message}};
    try {
      io::write_file_atomic(run.manifest, m.dump(2) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "meyerlift: cannot write manifest: " << e.what() << "\n";
      if (code == kOk) code = kInput;
    }
  }
  return code;
}
