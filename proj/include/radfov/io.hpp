/* Copyright 2026 The radfov Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

// Serialisation: shape specs, trajectory JSON, grid binaries, curve CSV.
// Needs nlohmann/json (vendored as json.hpp).

#include "analysis.hpp"
#include "design2d.hpp"
#include "design3d.hpp"
#include "error.hpp"
#include "gridding.hpp"
#include "sampling.hpp"
#include "shapes.hpp"

#include <json.hpp>

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace radfov::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view trajectory_schema = "radial-fov/1";

// Shortest decimal that parses back to the same double.
[[nodiscard]] inline std::string format_number(double v)
{
  char buf[32];
  auto const res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

[[nodiscard]] inline double parse_number(std::string_view text)
{
  double v = 0.0;
  auto const *end = text.data() + text.size();
  auto const res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw SpecError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

[[nodiscard]] inline std::vector<double> parse_list(std::string_view text)
{
  std::vector<double> out;
  while (true) {
    auto const comma = text.find(',');
    out.push_back(parse_number(text.substr(0, comma)));
    if (comma == std::string_view::npos) { break; }
    text.remove_prefix(comma + 1);
  }
  return out;
}

namespace detail {

inline ShapeFn shape_from_params(std::string_view kind, std::vector<double> const &p, double length_scale)
{
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi) {
      throw SpecError("shape '" + std::string(kind) + "' takes " + std::to_string(lo) +
                      (hi > lo ? ".." + std::to_string(hi) : std::string()) + " parameters, got " +
                      std::to_string(p.size()));
    }
  };
  if (kind == "circle") {
    need(1, 1);
    return ShapeFn::circle(p[0] * length_scale);
  }
  if (kind == "star") {
    need(2, 3);
    double const lobes = p.size() == 3 ? p[2] : 4.0;
    if (lobes != std::floor(lobes)) { throw SpecError("star lobe count must be an integer"); }
    return ShapeFn::star(p[0] * length_scale, p[1] * length_scale, static_cast<int>(lobes));
  }
  need(2, 2);
  double const wx = p[0] * length_scale;
  double const wy = p[1] * length_scale;
  if (kind == "ellipse") { return ShapeFn::ellipse(wx, wy); }
  if (kind == "rect" || kind == "rectangle") { return ShapeFn::rectangle(wx, wy); }
  if (kind == "diamond") { return ShapeFn::diamond(wx, wy); }
  if (kind == "oval" || kind == "stadium") { return ShapeFn::stadium(wx, wy); }
  throw SpecError("unknown shape kind '" + std::string(kind) + "'");
}

inline double unit_scale(Json const &j, double res)
{
  if (!j.contains("unit")) { return 1.0; }
  auto const unit = j.at("unit").get<std::string>();
  double const r = j.contains("res") ? j.at("res").get<double>() : res;
  if (!(r > 0.0)) { throw SpecError("resolution must be positive"); }
  if (unit == "px") { return 1.0; }
  if (unit == "mm") { return 1.0 / r; }
  if (unit == "cm") { return 10.0 / r; }
  throw SpecError("unknown length unit '" + unit + "'");
}

} // namespace detail

/* Shape from its JSON form, e.g. {"kind":"ellipse","wx":250,"wy":75}.
 * Lengths are px unless "unit" is mm or cm, converted with "res" (mm per
 * px, falling back to `res`). "rotation" and "scale" reproduce rotated or
 * scaled shapes such as duals.
 */
[[nodiscard]] inline ShapeFn shape_from_json(Json const &j, double res = 1.0)
{
  try {
    auto const kind = j.at("kind").get<std::string>();
    double const s = detail::unit_scale(j, res);
    ShapeFn shape = [&] {
      if (kind == "tabulated") {
        double const period = j.value("period", pi);
        auto values = j.at("values").get<std::vector<double>>();
        for (double &v : values) { v *= s; }
        return ShapeFn::tabulated(std::move(values), period);
      }
      if (kind == "circle") {
        return ShapeFn::circle((j.contains("d") ? j.at("d") : j.at("wx")).get<double>() * s);
      }
      if (kind == "star") {
        return ShapeFn::star(j.at("lo").get<double>() * s, j.at("hi").get<double>() * s, j.value("lobes", 4));
      }
      return detail::shape_from_params(kind, {j.at("wx").get<double>(), j.at("wy").get<double>()}, s);
    }();
    if (j.contains("rotation")) { shape = shape.rotated(j.at("rotation").get<double>()); }
    if (j.contains("scale")) { shape = shape.scaled(j.at("scale").get<double>()); }
    return shape;
  } catch (Json::exception const &e) {
    throw SpecError(std::string("bad shape JSON: ") + e.what());
  }
}

// Canonical JSON of a shape, always in px.
[[nodiscard]] inline Json shape_to_json(ShapeFn const &s)
{
  Json j;
  switch (s.kind()) {
  case ShapeKind::Circle: j = {{"kind", "circle"}, {"d", s.wx()}}; break;
  case ShapeKind::Star: j = {{"kind", "star"}, {"lo", s.wx()}, {"hi", s.wy()}, {"lobes", s.lobes()}}; break;
  case ShapeKind::Tabulated: j = {{"kind", "tabulated"}, {"values", s.table()}, {"period", s.period()}}; break;
  case ShapeKind::Rectangle: j = {{"kind", "rect"}, {"wx", s.wx()}, {"wy", s.wy()}}; break;
  case ShapeKind::Stadium: j = {{"kind", "oval"}, {"wx", s.wx()}, {"wy", s.wy()}}; break;
  default: j = {{"kind", std::string(to_string(s.kind()))}, {"wx", s.wx()}, {"wy", s.wy()}}; break;
  }
  if (s.rotation() != 0.0) { j["rotation"] = s.rotation(); }
  if (s.scale() != 1.0) { j["scale"] = s.scale(); }
  return j;
}

/* FOV spec: `kind:params` with lengths in mm divided by `res` (mm per px),
 * or a JSON object. circle:D; ellipse|rect|diamond|oval:WX,WY;
 * star:LO,HI[,LOBES].
 */
[[nodiscard]] inline ShapeFn parse_fov(std::string_view spec, double res = 1.0)
{
  if (!(res > 0.0)) { throw SpecError("resolution must be positive"); }
  if (!spec.empty() && spec.front() == '{') {
    Json j;
    try {
      j = Json::parse(spec);
    } catch (Json::exception const &e) {
      throw SpecError(std::string("bad shape JSON: ") + e.what());
    }
    return shape_from_json(j, res);
  }
  auto const colon = spec.find(':');
  if (colon == std::string_view::npos) { throw SpecError("shape spec must look like kind:params"); }
  return detail::shape_from_params(spec.substr(0, colon), parse_list(spec.substr(colon + 1)), 1.0 / res);
}

/* kmax spec in cycles/px: a bare number (isotropic), `kind:params` as for
 * FOVs but unscaled, `dual` or `dual:PEAK` for the dual of `fov`.
 */
[[nodiscard]] inline ShapeFn parse_kmax(std::string_view spec, ShapeFn const &fov)
{
  if (spec.empty()) { return ShapeFn::circle(nominal_kmax); }
  if (spec == "dual") { return dual_shape(fov); }
  if (spec.starts_with("dual:")) { return dual_shape(fov, parse_number(spec.substr(5))); }
  ShapeFn const k = spec.find(':') == std::string_view::npos && spec.front() != '{' ? ShapeFn::circle(parse_number(spec))
                                                                                   : parse_fov(spec, 1.0);
  if (k.max_value() > 0.5 + 1e-12) { throw SpecError("kmax above 0.5 cycles/px is outside the band"); }
  return k;
}

// ---------------------------------------------------------------- trajectories

[[nodiscard]] inline Json trajectory_json(ProjectionSet2D const &set,
                                          ShapeFn const &fov,
                                          ShapeFn const &kmax,
                                          ProjectionKind kind,
                                          double dkr,
                                          double res)
{
  Json j;
  j["schema"] = trajectory_schema;
  j["mode"] = "pr2d";
  j["kind"] = to_string(kind);
  j["seed"] = 0;
  j["res"] = res;
  j["dkr"] = dkr;
  j["shapes"] = {{"fov", shape_to_json(fov)}, {"kmax", shape_to_json(kmax)}};
  j["N"] = set.size();
  j["scale"] = set.scale;
  auto const dcf = angular_dcf_2d(set, fov);
  Json p = Json::array();
  for (std::size_t n = 0; n < set.size(); ++n) {
    p.push_back({{"angle", set.angles[n]}, {"kmax", set.extents[n]}, {"dcf_angular", dcf[n]}});
  }
  j["projections"] = std::move(p);
  return j;
}

[[nodiscard]] inline Json cones_json(ConeSet const &cones, ShapeFn const &fov_theta, ShapeFn const &kmax_theta, double res)
{
  Json j;
  j["schema"] = trajectory_schema;
  j["mode"] = "cones3d";
  j["kind"] = "full";
  j["seed"] = 0;
  j["res"] = res;
  j["shapes"] = {{"fovt", shape_to_json(fov_theta)}, {"kmax", shape_to_json(kmax_theta)}};
  j["N"] = cones.deflections.size();
  Json p = Json::array();
  for (std::size_t n = 0; n < cones.deflections.size(); ++n) {
    p.push_back({{"theta", cones.deflections[n]}, {"kmax", cones.extents[n]}});
  }
  j["projections"] = std::move(p);
  return j;
}

// dcf_angular is the full angular compensation, end ramp included.
[[nodiscard]] inline Json trajectory_json(Trajectory3D const &traj,
                                          ShapeFn const &fov_theta,
                                          ShapeFn const &kmax_theta,
                                          ShapeFn const &fov_phi,
                                          double dkr,
                                          double res)
{
  Json j;
  j["schema"] = trajectory_schema;
  j["mode"] = traj.method == Method::ConesBased ? "pr3d-cones" : "pr3d-spiral";
  j["kind"] = to_string(traj.kind);
  j["seed"] = traj.seed;
  j["res"] = res;
  j["dkr"] = dkr;
  j["shapes"] = {
      {"fovt", shape_to_json(fov_theta)}, {"kmax", shape_to_json(kmax_theta)}, {"fovp", shape_to_json(fov_phi)}};
  j["N"] = traj.size();
  if (!traj.per_cone.empty()) { j["per_cone"] = traj.per_cone; }
  auto const dcf = angular_dcf_3d(traj, fov_theta, fov_phi);
  Json p = Json::array();
  for (std::size_t m = 0; m < traj.size(); ++m) {
    auto const &q = traj.projections[m];
    p.push_back({{"theta", q.theta},
                 {"phi", q.phi},
                 {"phi_total", q.phi_total},
                 {"kmax", q.kmax},
                 {"dcf_angular", dcf[m]}});
  }
  j["projections"] = std::move(p);
  return j;
}

[[nodiscard]] inline ProjectionKind kind_from_string(std::string_view s)
{
  if (s == "full") { return ProjectionKind::Full; }
  if (s == "half") { return ProjectionKind::Half; }
  throw SpecError("projection kind must be full or half, got '" + std::string(s) + "'");
}

[[nodiscard]] inline Method method_from_string(std::string_view s)
{
  if (s == "cones" || s == "pr3d-cones") { return Method::ConesBased; }
  if (s == "spiral" || s == "pr3d-spiral") { return Method::SpiralBased; }
  throw SpecError("method must be cones or spiral, got '" + std::string(s) + "'");
}

[[nodiscard]] inline int trajectory_ndim(Json const &traj)
{
  auto const mode = traj.at("mode").get<std::string>();
  if (mode == "pr2d") { return 2; }
  if (mode == "pr3d-cones" || mode == "pr3d-spiral") { return 3; }
  if (mode == "cones3d") { throw SpecError("cones3d trajectories list cone angles only and cannot be sampled"); }
  throw SpecError("unknown trajectory mode '" + mode + "'");
}

// Largest FOV chord of the shapes recorded in a trajectory.
[[nodiscard]] inline double trajectory_max_fov(Json const &traj)
{
  auto const &sh = traj.at("shapes");
  if (sh.contains("fov")) { return shape_from_json(sh.at("fov")).max_value(); }
  return std::max(shape_from_json(sh.at("fovt")).max_value(), shape_from_json(sh.at("fovp")).max_value());
}

/* Sample set of an exported trajectory, with the recorded angular dcf. */
[[nodiscard]] inline SampledKSpace samples_from_trajectory(Json const &traj)
{
  try {
    if (traj.value("schema", std::string()) != trajectory_schema) {
      throw SpecError("trajectory schema is not " + std::string(trajectory_schema));
    }
    int const nd = trajectory_ndim(traj);
    auto const kind = kind_from_string(traj.at("kind").get<std::string>());
    double const dkr = traj.at("dkr").get<double>();
    auto const &proj = traj.at("projections");
    std::vector<double> dcf;
    dcf.reserve(proj.size());
    for (auto const &p : proj) { dcf.push_back(p.at("dcf_angular").get<double>()); }
    SampledKSpace s;
    if (nd == 2) {
      ProjectionSet2D set;
      for (auto const &p : proj) {
        set.angles.push_back(p.at("angle").get<double>());
        set.extents.push_back(p.at("kmax").get<double>());
      }
      s = sample_projections(set, dkr, kind);
    } else {
      Trajectory3D t;
      t.kind = kind;
      for (auto const &p : proj) {
        t.projections.push_back(
            {p.at("theta").get<double>(), p.at("phi").get<double>(), p.value("phi_total", 0.0), p.at("kmax").get<double>(), 0.0, -1});
      }
      s = sample_projections(t, dkr);
    }
    apply_dcf(s, dcf);
    return s;
  } catch (Json::exception const &e) {
    throw SpecError(std::string("bad trajectory JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------- grids

struct GridHeader
{
  std::array<std::size_t, 3> dims{1, 1, 1};
  int ndim = 2;
  bool complex = false;
};

[[nodiscard]] inline Json grid_sidecar(GridVolume const &g, bool complex)
{
  Json dims = Json::array();
  for (int d = 0; d < g.ndim; ++d) { dims.push_back(g.dims[static_cast<std::size_t>(d)]); }
  return {{"dims", dims},
          {"dtype", "float32"},
          {"complex", complex},
          {"layout", "row-major, x fastest"},
          {"origin", "index floor(N/2) on every axis"},
          {"axis_units", std::vector<std::string>(static_cast<std::size_t>(g.ndim), "px")},
          {"endianness", "little"}};
}

namespace detail {

inline void put_f32(std::string &buf, double v)
{
  auto const bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
  for (int b = 0; b < 4; ++b) { buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu)); }
}

inline float get_f32(unsigned char const *p)
{
  std::uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) { bits |= static_cast<std::uint32_t>(p[b]) << (8 * b); }
  return std::bit_cast<float>(bits);
}

} // namespace detail

// Little-endian float32, real parts only or interleaved (re, im).
[[nodiscard]] inline std::string grid_bytes(GridVolume const &g, bool complex)
{
  std::string buf;
  buf.reserve(g.size() * (complex ? 8 : 4));
  for (auto const &v : g.values) {
    detail::put_f32(buf, v.real());
    if (complex) { detail::put_f32(buf, v.imag()); }
  }
  return buf;
}

[[nodiscard]] inline GridVolume grid_from_bytes(std::string_view bytes, GridHeader const &h)
{
  std::size_t const count = h.dims[0] * h.dims[1] * h.dims[2];
  std::size_t const width = h.complex ? 8 : 4;
  if (bytes.size() != count * width) {
    throw SpecError("grid file holds " + std::to_string(bytes.size()) + " bytes, sidecar implies " +
                    std::to_string(count * width));
  }
  GridVolume g(h.ndim, h.dims);
  auto const *p = reinterpret_cast<unsigned char const *>(bytes.data());
  for (std::size_t i = 0; i < count; ++i, p += width) {
    g.values[i] = Complex(detail::get_f32(p), h.complex ? detail::get_f32(p + 4) : 0.0f);
  }
  return g;
}

[[nodiscard]] inline GridHeader header_from_sidecar(Json const &j)
{
  try {
    if (j.value("dtype", std::string("float32")) != "float32") { throw SpecError("only float32 grids are supported"); }
    if (j.value("endianness", std::string("little")) != "little") { throw SpecError("only little-endian grids are supported"); }
    auto const dims = j.at("dims").get<std::vector<std::size_t>>();
    if (dims.size() < 2 || dims.size() > 3) { throw SpecError("grid must be 2D or 3D"); }
    GridHeader h;
    h.ndim = static_cast<int>(dims.size());
    for (std::size_t d = 0; d < dims.size(); ++d) { h.dims[d] = dims[d]; }
    h.complex = j.at("complex").get<bool>();
    return h;
  } catch (Json::exception const &e) {
    throw SpecError(std::string("bad grid sidecar: ") + e.what());
  }
}

// ---------------------------------------------------------------- files

[[nodiscard]] inline std::string read_file(std::string const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw SpecError("cannot open '" + path + "'"); }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(std::string const &path, std::string_view bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw SpecError("cannot write '" + path + "'");
  }
}

[[nodiscard]] inline Json read_json(std::string const &path)
{
  try {
    return Json::parse(read_file(path));
  } catch (Json::exception const &e) {
    throw SpecError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------- curves

inline constexpr std::string_view curve_header = "shape,size_param,area_or_volume,N";

[[nodiscard]] inline std::string curve_csv(std::vector<EfficiencyPoint> const &pts)
{
  std::string out(curve_header);
  out += '\n';
  for (auto const &p : pts) {
    out += p.shape + ',' + format_number(p.size) + ',' + format_number(p.measure) + ',' + std::to_string(p.count) + '\n';
  }
  return out;
}

} // namespace radfov::io
