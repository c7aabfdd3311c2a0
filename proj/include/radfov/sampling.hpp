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

#include "design2d.hpp"
#include "design3d.hpp"
#include "error.hpp"
#include "shapes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace radfov {

/* Discrete samples along every projection of a design.
 *
 * Every projection carries the same normalised radial positions j / J
 * (j = -J..J for full, 0..J for half), scaled by its own extent. Sample s of
 * projection n sits at flat index n * per_projection + (j - j_min), so the
 * separable dcf is radial[j] * angular[n].
 */
struct SampledKSpace
{
  int ndim = 2;
  ProjectionKind kind = ProjectionKind::Full;
  double dkr = 0.0;    // requested radial spacing, cycles/px
  std::size_t J = 0;   // radial samples per half-spoke past the origin
  std::size_t projections = 0;
  std::vector<std::array<double, 3>> k; // cycles/px, unused components zero
  std::vector<double> dcf;
  std::vector<std::uint32_t> projection; // projection index per sample
  std::vector<double> radial;            // radial dcf per position
  std::vector<double> angular;           // angular dcf per projection

  [[nodiscard]] std::size_t size() const { return k.size(); }
  [[nodiscard]] std::size_t per_projection() const { return kind == ProjectionKind::Full ? 2 * J + 1 : J + 1; }
  [[nodiscard]] long j_min() const { return kind == ProjectionKind::Full ? -static_cast<long>(J) : 0; }
};

struct SamplingOptions
{
  // When positive, Delta kr > 1 / max_fov raises SpacingTooCoarse.
  double max_fov = 0.0;
  bool allow_coarse = false;
};

namespace detail {

inline std::size_t radial_count(double kmax_ref, double dkr)
{
  if (!(dkr > 0.0) || !std::isfinite(dkr)) { throw SpecError("radial spacing must be positive"); }
  return static_cast<std::size_t>(std::max(1.0, std::ceil(kmax_ref / dkr - 1e-9)));
}

inline void check_spacing(double dkr, SamplingOptions const &opt)
{
  if (opt.max_fov > 0.0 && !opt.allow_coarse && dkr > (1.0 + 1e-12) / opt.max_fov) {
    throw SpacingTooCoarse("radial spacing " + std::to_string(dkr) + " exceeds 1/max(FOV) = " +
                           std::to_string(1.0 / opt.max_fov));
  }
}

template <typename Direction>
SampledKSpace sample_along(std::size_t count,
                           int ndim,
                           ProjectionKind kind,
                           double dkr,
                           SamplingOptions const &opt,
                           std::span<double const> extents,
                           Direction direction)
{
  check_spacing(dkr, opt);
  SampledKSpace out;
  out.ndim = ndim;
  out.kind = kind;
  out.dkr = dkr;
  out.projections = count;
  double const kmax_ref = count ? *std::max_element(extents.begin(), extents.end()) : 0.0;
  out.J = radial_count(kmax_ref, dkr);
  std::size_t const per = out.per_projection();
  out.k.reserve(count * per);
  out.projection.reserve(count * per);
  for (std::size_t n = 0; n < count; ++n) {
    std::array<double, 3> const u = direction(n);
    double const step = extents[n] / static_cast<double>(out.J);
    for (long j = out.j_min(); j <= static_cast<long>(out.J); ++j) {
      double const r = static_cast<double>(j) * step;
      out.k.push_back({r * u[0], r * u[1], r * u[2]});
      out.projection.push_back(static_cast<std::uint32_t>(n));
    }
  }
  out.dcf.assign(out.k.size(), 1.0);
  return out;
}

} // namespace detail

[[nodiscard]] inline SampledKSpace
sample_projections(ProjectionSet2D const &set, double dkr, ProjectionKind kind, SamplingOptions const &opt = {})
{
  return detail::sample_along(set.size(), 2, kind, dkr, opt, set.extents, [&](std::size_t n) {
    return std::array<double, 3>{std::cos(set.angles[n]), std::sin(set.angles[n]), 0.0};
  });
}

[[nodiscard]] inline SampledKSpace sample_projections(Trajectory3D const &traj, double dkr, SamplingOptions const &opt = {})
{
  std::vector<double> extents(traj.size());
  for (std::size_t n = 0; n < traj.size(); ++n) { extents[n] = traj.projections[n].kmax; }
  return detail::sample_along(traj.size(), 3, traj.kind, dkr, opt, extents, [&](std::size_t n) {
    auto const &p = traj.projections[n];
    double const s = std::sin(p.theta);
    return std::array<double, 3>{s * std::cos(p.phi), s * std::sin(p.phi), std::cos(p.theta)};
  });
}

/* Radial dcf for equally spaced samples at normalised radii j / J.
 *
 * Away from the origin the weight is the asymptotic ring (2D, |j| / J^2) or
 * shell (3D, j^2 / J^3) measure. The origin gets the exact measure of the
 * half-spacing disk or ball, split between the half-spokes that reach it: a
 * full projection is two half-spokes and gets twice the half-spoke share.
 * Multiplying by the angular dcf of every projection then partitions that
 * disk or ball among all projections.
 */
[[nodiscard]] inline std::vector<double> radial_dcf(int ndim, ProjectionKind kind, std::size_t J)
{
  if (ndim != 2 && ndim != 3) { throw SpecError("radial dcf is defined for 2D and 3D"); }
  if (J == 0) { return {1.0}; }
  double const Jd = static_cast<double>(J);
  double const share = kind == ProjectionKind::Full ? 2.0 : 1.0;
  long const lo = kind == ProjectionKind::Full ? -static_cast<long>(J) : 0;
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(static_cast<long>(J) - lo + 1));
  for (long j = lo; j <= static_cast<long>(J); ++j) {
    double const a = std::abs(static_cast<double>(j));
    if (ndim == 2) {
      // disk of radius 1/2 over 2pi of half-spokes: (pi/4) / (2pi) = 1/8
      w.push_back(j == 0 ? share / (8.0 * Jd * Jd) : a / (Jd * Jd));
    } else {
      // ball of radius 1/2 over 4pi of half-spokes: (pi/6) / (4pi) = 1/24
      w.push_back(j == 0 ? share / (24.0 * Jd * Jd * Jd) : a * a / (Jd * Jd * Jd));
    }
  }
  return w;
}

// Angular dcf of a 2D design: Kmax[n] / FOV(theta[n] + pi/2).
[[nodiscard]] inline std::vector<double> angular_dcf_2d(ProjectionSet2D const &set, ShapeFn const &fov)
{
  std::vector<double> w(set.size());
  for (std::size_t n = 0; n < set.size(); ++n) { w[n] = set.extents[n] / fov(set.angles[n] + 0.5 * pi); }
  return w;
}

/* Polar angle of the spiral at accumulated azimuth `phi_total`, linearly
 * interpolated between projections.
 */
[[nodiscard]] inline double spiral_theta_at(Trajectory3D const &traj, double phi_total)
{
  auto const &p = traj.projections;
  if (p.empty()) { return 0.0; }
  if (phi_total <= p.front().phi_total) { return p.front().theta; }
  for (std::size_t m = 1; m < p.size(); ++m) {
    if (phi_total <= p[m].phi_total) {
      double const span = p[m].phi_total - p[m - 1].phi_total;
      double const u = span > 0.0 ? (phi_total - p[m - 1].phi_total) / span : 1.0;
      return p[m - 1].theta + u * (p[m].theta - p[m - 1].theta);
    }
  }
  return p.back().theta;
}

/* Ramp applied to the full-projection spiral dcf: over each of the last two
 * half-turns of accumulated azimuth, (end - 2pi, end - pi] and (end - pi, end],
 * the weight falls linearly from 1 to 0.5 as theta increases across the
 * half-turn. Returns 1 outside both windows.
 */
[[nodiscard]] inline std::vector<double> spiral_end_ramp(Trajectory3D const &traj)
{
  std::vector<double> f(traj.size(), 1.0);
  if (traj.method != Method::SpiralBased || traj.kind != ProjectionKind::Full || traj.size() < 2) { return f; }
  double const end = traj.projections.back().phi_total;
  for (int w = 0; w < 2; ++w) {
    double const hi = end - pi * w;
    double const lo = hi - pi;
    double const theta_lo = spiral_theta_at(traj, lo);
    double const theta_hi = spiral_theta_at(traj, hi);
    double const span = theta_hi - theta_lo;
    for (std::size_t m = 0; m < traj.size(); ++m) {
      double const phi = traj.projections[m].phi_total;
      if (phi > lo && phi <= hi) {
        double const u = span > 0.0 ? std::clamp((traj.projections[m].theta - theta_lo) / span, 0.0, 1.0) : 1.0;
        f[m] = 1.0 - 0.5 * u;
      }
    }
  }
  return f;
}

// Angular dcf of a 3D PR design, D = Kmax / (FOV_theta(theta + pi/2) FOV_phi(phi + pi/2)),
// with the end ramp for full-projection spirals.
[[nodiscard]] inline std::vector<double>
angular_dcf_3d(Trajectory3D const &traj, ShapeFn const &fov_theta, ShapeFn const &fov_phi)
{
  auto w = spiral_end_ramp(traj);
  for (std::size_t m = 0; m < traj.size(); ++m) {
    auto const &p = traj.projections[m];
    w[m] *= detail::angular_weight(p.kmax, p.theta, p.phi, fov_theta, fov_phi);
  }
  return w;
}

// Sets dcf = radial[j] * angular[n] on every sample.
inline void apply_dcf(SampledKSpace &s, std::span<double const> angular)
{
  if (angular.size() != s.projections) { throw SpecError("angular dcf size does not match projection count"); }
  s.radial = radial_dcf(s.ndim, s.kind, s.J);
  s.angular.assign(angular.begin(), angular.end());
  std::size_t const per = s.per_projection();
  for (std::size_t i = 0; i < s.size(); ++i) { s.dcf[i] = s.radial[i % per] * s.angular[s.projection[i]]; }
}

} // namespace radfov
