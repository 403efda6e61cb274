#pragma once

// JSON / CSV / SVG encodings. Readers report malformed input as InputError
// with the JSON pointer of the offending value.

#include <string>

#include <nlohmann/json.hpp>

#include "meyer/freiman.hpp"
#include "meyer/gaps.hpp"
#include "meyer/geometry.hpp"
#include "meyer/lift.hpp"
#include "meyer/modelsets.hpp"
#include "meyer/sumsets.hpp"
#include "meyer/toruscover.hpp"

namespace meyer::io {

using json = nlohmann::json;

const char* library_version();

// Rationals are written as "p/q" strings (integers without the slash) and
// read from strings or JSON integers.
json encode(const Rational& x);
json encode(const RatVec& v);
Rational decode_rational(const json& j, const std::string& path = "");
RatVec decode_vec(const json& j, const std::string& path = "", std::size_t dim = 0);

// {"rat": "p/q"} or {"quad": {"p", "q", "r", "D"}} for (p + q sqrt D) / r.
json encode(const Quad& x);
json encode(const QuadVec& v);
Quad decode_quad(const json& j, const std::string& path = "");
QuadVec decode_quad_vec(const json& j, const std::string& path = "", std::size_t dim = 0);

json encode(const Box& b);
Box decode_box(const json& j, const std::string& path = "");

// {"dim", "region": {"lo", "hi"}, "points"}
json encode(const PointPatch& p);
PointPatch decode_patch(const json& j);

// {"dim", "points"}; a patch is accepted too.
json encode(const FiniteSet& s);
FiniteSet decode_set(const json& j);

// {"steps", "lengths", "base", "symmetric"}
json encode(const Gap& g);
Gap decode_gap(const json& j, const std::string& path = "");

// {"d", "e", "generators", "window": [{"lo", "hi"}], "shifts"}
json encode(const Scheme& s);
Scheme decode_scheme(const json& j);

// {"dim", "resolution", "rle": [zeros, ones, zeros, ...]} over the flat cell
// order, or {"dim", "resolution", "cells": [[i, j], ...]}.
json encode(const GridSet& g);
GridSet decode_grid(const json& j);

json encode(const DensityReport& r);
/// Columns R, center, count, density.
std::string density_csv(const DensityReport& r);

json encode(const CoverResult& r);
json encode(const CoverCertificate& c);
json encode(const ParallelepipedCertificate& c);
json encode(const PlunneckeReport& r);
json encode(const RuzsaReport& r);
json encode(const DoublingReport& r);
json encode(const ConditionReport& r);
json encode(const ReductionStep& s);
json encode(const ReduceResult& r);
json encode(const GeneratedPatch& g);
json encode(const DoublingProfile& p);
json encode(const LiftCertificate& c);
json encode(const StabilizationReport& r);
json encode(const InternalDimensionReport& r);

struct SvgOptions {
  std::string title;
  int width = 800;
  int height = 800;
};

/// Points as squares whose side is the discreteness radius (1-D patches are
/// drawn on a line).
std::string render_svg(const PointPatch& p, const SvgOptions& options = {});

json read_json_file(const std::string& path);
/// Writes through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace meyer::io
