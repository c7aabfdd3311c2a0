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
#include "error.hpp"
#include "shapes.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

/* 3D radial designs. Spherical coordinates throughout: theta is the polar
 * deflection from +kz, phi the azimuth from +kx.
 *
 * Polar inputs (fov_theta, kmax_theta) are functions of theta. A shape drawn in
 * the (rho, z) plane becomes one through polar_view(). The azimuthal FOV
 * fov_phi is a function of the cylindrical angle in the x-y plane.
 */
namespace radfov {

enum class Method
{
  ConesBased,
  SpiralBased
};

enum class ProjectionKind
{
  Full, // spans [-kmax, kmax]
  Half  // spans [0, kmax]
};

[[nodiscard]] inline std::string_view to_string(Method m) { return m == Method::ConesBased ? "cones" : "spiral"; }
[[nodiscard]] inline std::string_view to_string(ProjectionKind k) { return k == ProjectionKind::Full ? "full" : "half"; }

// Deterministic generator: splitmix64, mapped to doubles in [0, 1).
class SplitMix64
{
public:
  explicit SplitMix64(std::uint64_t seed)
    : state_(seed)
  {
  }

  std::uint64_t next()
  {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

// Per-cone substream, so cones can be sampled in any order.
[[nodiscard]] inline std::uint64_t cone_stream_seed(std::uint64_t seed, std::uint64_t cone)
{
  SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (cone + 1)));
  return mix.next();
}

struct ConeSet
{
  std::vector<double> deflections; // radians from +kz
  std::vector<double> extents;     // cycles/px
  [[nodiscard]] std::size_t size() const { return deflections.size(); }
};

struct Projection3D
{
  double theta = 0.0;
  double phi = 0.0;         // wrapped to [0, 2pi)
  double phi_total = 0.0;   // accumulated azimuth along the design path
  double kmax = 0.0;
  double dcf_angular = 0.0; // polar x azimuthal compensation
  int cone = -1;            // cones-based only
};

struct Trajectory3D
{
  std::vector<Projection3D> projections;
  Method method = Method::SpiralBased;
  ProjectionKind kind = ProjectionKind::Full;
  std::uint64_t seed = 0;
  std::vector<std::size_t> per_cone; // M_n, cones-based only

  [[nodiscard]] std::size_t size() const { return projections.size(); }
};

/* Cone deflections for 3D cones imaging. The offset phi0 = half of the first
 * polar gap keeps the first cone from collapsing onto the kz axis.
 */
[[nodiscard]] inline ConeSet design_cones(ShapeFn const &fov_theta, ShapeFn const &kmax_theta)
{
  Design2DOptions opt;
  opt.phi0 = 1.0 / (2.0 * kmax_theta(0.0) * fov_theta(0.5 * pi));
  opt.width = pi;
  auto const set = design_2d(fov_theta, kmax_theta, opt);
  return ConeSet{set.angles, set.extents};
}

namespace detail {

inline void check_azimuthal_fits(ShapeFn const &fov_theta, ShapeFn const &fov_phi)
{
  double const transverse = fov_theta(0.5 * pi);
  double const widest = fov_phi.max_value();
  if (widest > transverse * (1.0 + 1e-9)) {
    throw FovConstraintViolated("azimuthal FOV (max " + std::to_string(widest) +
                                " px) exceeds the polar FOV in the x-y plane (" + std::to_string(transverse) + " px)");
  }
}

inline double angular_weight(double kmax, double theta, double phi, ShapeFn const &fov_theta, ShapeFn const &fov_phi)
{
  return kmax / (fov_theta(theta + 0.5 * pi) * fov_phi(phi + 0.5 * pi));
}

inline double wrap_two_pi(double phi)
{
  double w = std::fmod(phi, 2.0 * pi);
  return w < 0.0 ? w + 2.0 * pi : w;
}

} // namespace detail

/* Cones-based 3D PR. Polar cones come from the 2D design over [0, pi/2]
 * (full) or [0, pi] (half); each cone is then sampled azimuthally with the
 * extent shrunk by sin(theta) and a random start angle. The first cone is the
 * single projection along kz. Full designs add one half-sampled equatorial
 * cone.
 */
[[nodiscard]] inline Trajectory3D design_pr3d_cones(ShapeFn const &fov_theta,
                                                    ShapeFn const &kmax_theta,
                                                    ShapeFn const &fov_phi,
                                                    ProjectionKind kind,
                                                    std::uint64_t seed)
{
  detail::check_azimuthal_fits(fov_theta, fov_phi);

  Design2DOptions polar_opt;
  polar_opt.width = kind == ProjectionKind::Full ? 0.5 * pi : pi;
  auto const cones = design_2d(fov_theta, kmax_theta, polar_opt);

  Trajectory3D traj;
  traj.method = Method::ConesBased;
  traj.kind = kind;
  traj.seed = seed;

  auto add_cone = [&](int index, double theta, double kmax, double width) {
    double const k_azimuthal = kmax * std::sin(theta);
    SplitMix64 rng(cone_stream_seed(seed, static_cast<std::uint64_t>(index)));
    Design2DOptions opt;
    opt.phi0 = rng.uniform() / (k_azimuthal * fov_phi(0.5 * pi));
    opt.width = width;
    opt.max_gap = 2.0 * pi;
    auto const ring = design_2d(fov_phi, Constant{k_azimuthal}, opt);
    for (double phi : ring.angles) {
      traj.projections.push_back(Projection3D{theta,
                                              detail::wrap_two_pi(phi),
                                              phi,
                                              kmax,
                                              detail::angular_weight(kmax, theta, phi, fov_theta, fov_phi),
                                              index});
    }
    traj.per_cone.push_back(ring.size());
  };

  for (std::size_t n = 0; n < cones.size(); ++n) {
    double const theta = cones.angles[n];
    double const kmax = cones.extents[n];
    if (n == 0) {
      traj.projections.push_back(
        Projection3D{theta, 0.0, 0.0, kmax, detail::angular_weight(kmax, theta, 0.0, fov_theta, fov_phi), 0});
      traj.per_cone.push_back(1);
      continue;
    }
    add_cone(static_cast<int>(n), theta, kmax, 2.0 * pi);
  }
  if (kind == ProjectionKind::Full) {
    add_cone(static_cast<int>(cones.size()), 0.5 * pi, kmax_theta(0.5 * pi), pi);
  }
  return traj;
}

/* Knots of the spiral path: polar samples, their extents, and the estimated
 * projection count between consecutive knots. t[0] = 1 and
 * t[n+1] - t[n] = segment_estimates[n].
 */
struct Spiral3DIntermediate
{
  std::vector<double> theta_knots;
  std::vector<double> kmax_knots;
  std::vector<double> segment_estimates;
  std::vector<double> t_knots;
  double k_azimuthal = 0.0;
  std::size_t azimuthal_estimate = 0; // N_phi,est
  std::size_t polar_count = 0;        // N_polar

  // Piecewise-linear theta(t) and k(t).
  [[nodiscard]] std::pair<double, double> at(double t) const
  {
    std::size_t i = 0;
    while (i + 2 < t_knots.size() && t > t_knots[i + 1]) { ++i; }
    double const span = t_knots[i + 1] - t_knots[i];
    double const u = span > 0.0 ? (t - t_knots[i]) / span : 0.0;
    return {theta_knots[i] + u * (theta_knots[i + 1] - theta_knots[i]),
            kmax_knots[i] + u * (kmax_knots[i + 1] - kmax_knots[i])};
  }

  [[nodiscard]] std::size_t total() const
  {
    double sum = 0.0;
    for (double e : segment_estimates) { sum += e; }
    return static_cast<std::size_t>(std::llround(sum));
  }
};

[[nodiscard]] inline Spiral3DIntermediate spiral_knots(ShapeFn const &fov_theta,
                                                       ShapeFn const &kmax_theta,
                                                       ShapeFn const &fov_phi,
                                                       ProjectionKind kind)
{
  bool const full = kind == ProjectionKind::Full;
  Design2DOptions polar_opt;
  polar_opt.width = full ? 0.5 * pi : pi;
  auto const polar = design_2d(fov_theta, kmax_theta, polar_opt);

  Spiral3DIntermediate sp;
  sp.polar_count = polar.size();
  sp.k_azimuthal = kmax_theta(0.5 * pi);
  Design2DOptions ring_opt;
  ring_opt.width = 2.0 * pi;
  sp.azimuthal_estimate = design_2d(fov_phi, Constant{sp.k_azimuthal}, ring_opt).size();
  double const n_phi = static_cast<double>(sp.azimuthal_estimate);

  sp.theta_knots = polar.angles;
  sp.kmax_knots = polar.extents;
  double const closing = full ? 0.5 * pi : pi;
  sp.theta_knots.push_back(closing);
  sp.kmax_knots.push_back(kmax_theta(closing));

  for (std::size_t n = 0; n + 1 < sp.theta_knots.size(); ++n) {
    double const mid = 0.5 * (sp.theta_knots[n] + sp.theta_knots[n + 1]);
    double const kmean = 0.5 * (sp.kmax_knots[n] + sp.kmax_knots[n + 1]);
    sp.segment_estimates.push_back(n_phi * std::sin(mid) * kmean / sp.k_azimuthal);
  }
  if (full) {
    // Extra quarter-turn past the equator for the opposing spiral ends.
    double const extra = 0.5 * pi + 1.0 / (4.0 * sp.k_azimuthal * fov_theta(pi));
    sp.theta_knots.push_back(extra);
    sp.kmax_knots.push_back(kmax_theta(extra));
    sp.segment_estimates.push_back(n_phi / 4.0);
  }

  sp.t_knots.assign(1, 1.0);
  for (double e : sp.segment_estimates) { sp.t_knots.push_back(sp.t_knots.back() + e); }
  return sp;
}

/* Spiral-based 3D PR. Polar knots from the 2D design are joined by a
 * continuous path that holds the estimated number of projections between
 * knots; the azimuth then advances with the same mid-angle recurrence as the
 * 2D design, scaled by the local cone circumference. At the pole sin(theta)
 * vanishes and the azimuthal step is capped at a full turn.
 */
[[nodiscard]] inline Trajectory3D design_pr3d_spiral(ShapeFn const &fov_theta,
                                                     ShapeFn const &kmax_theta,
                                                     ShapeFn const &fov_phi,
                                                     ProjectionKind kind,
                                                     std::uint64_t seed = 0)
{
  detail::check_azimuthal_fits(fov_theta, fov_phi);
  auto const sp = spiral_knots(fov_theta, kmax_theta, fov_phi, kind);
  std::size_t const count = sp.total();
  if (count < 2) { throw DegenerateShape("spiral design produced fewer than 2 projections"); }

  Trajectory3D traj;
  traj.method = Method::SpiralBased;
  traj.kind = kind;
  traj.seed = seed;
  traj.projections.reserve(count);

  double const quarter = 0.5 * pi;
  double const turn = 2.0 * pi;
  auto azimuthal_step = [&](double ring_k, double phi) {
    if (!(ring_k > 0.0)) { return turn; }
    double const estimate = 1.0 / (ring_k * fov_phi(phi + quarter));
    double const step = 1.0 / (ring_k * fov_phi(phi + 0.5 * std::min(estimate, turn) + quarter));
    return std::min(step, turn);
  };

  double phi = 0.0;
  for (std::size_t m = 1; m <= count; ++m) {
    auto const [theta, kmax] = sp.at(static_cast<double>(m));
    traj.projections.push_back(Projection3D{theta,
                                            detail::wrap_two_pi(phi),
                                            phi,
                                            kmax,
                                            detail::angular_weight(kmax, theta, phi, fov_theta, fov_phi),
                                            -1});
    phi += azimuthal_step(kmax * std::sin(theta), phi);
  }
  return traj;
}

} // namespace radfov
