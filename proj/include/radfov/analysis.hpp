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
#include "gridding.hpp"
#include "sampling.hpp"
#include "shapes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace radfov {

using Vec3 = std::array<double, 3>;

[[nodiscard]] inline double sinc(double t)
{
  if (std::abs(t) < 1e-12) { return 1.0; }
  return std::sin(pi * t) / (pi * t);
}

// cos(pi dk y) sinc(2 kmax x): PSF of two parallel sampled lines dk apart, C = 1.
[[nodiscard]] inline double two_line_psf_model(double dk, double kmax, double x, double y)
{
  return std::cos(pi * dk * y) * sinc(2.0 * kmax * x);
}

[[nodiscard]] inline Vec3 direction_2d(double psi) { return {std::cos(psi), std::sin(psi), 0.0}; }

// |PSF| at a fractional position (px from the centre), multilinear interpolation.
// Positions outside the frame return -1.
[[nodiscard]] inline double magnitude_at(GridVolume const &g, Vec3 const &p)
{
  std::array<long, 3> base{};
  std::array<double, 3> frac{};
  for (int d = 0; d < 3; ++d) {
    if (d >= g.ndim) {
      base[d] = 0;
      frac[d] = 0.0;
      continue;
    }
    double const fl = std::floor(p[d]);
    base[d] = static_cast<long>(fl);
    frac[d] = p[d] - fl;
    long const lo = base[d] + g.centre(d);
    if (lo < 0 || lo + 1 >= static_cast<long>(g.dims[d])) { return -1.0; }
  }
  double acc = 0.0;
  int const corners = 1 << g.ndim;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::array<long, 3> q = base;
    for (int d = 0; d < g.ndim; ++d) {
      bool const up = (c >> d) & 1;
      q[d] += up ? 1 : 0;
      w *= up ? frac[d] : 1.0 - frac[d];
    }
    acc += w * std::abs(g.at(q[0], q[1], q[2]));
  }
  return acc;
}

// Full width at half maximum of |PSF| through the centre along `dir`.
[[nodiscard]] inline double measure_fwhm(GridVolume const &psf, Vec3 const &dir, double step = 0.01)
{
  double const peak = std::abs(psf.origin());
  double prev = peak;
  for (double r = step;; r += step) {
    double const v = magnitude_at(psf, {r * dir[0], r * dir[1], r * dir[2]});
    if (v < 0.0) { throw RidgeNotFound("half maximum not reached inside the frame"); }
    if (v <= 0.5 * peak) {
      double const t = (prev - 0.5 * peak) / (prev - v);
      return 2.0 * (r - step + t * step);
    }
    prev = v;
  }
}

// PSF at position x (px) evaluated directly from the samples: sum of dcf * exp(2 pi i k.x).
[[nodiscard]] inline Complex psf_value(SampledKSpace const &s, Vec3 const &x)
{
  Complex acc{};
  for (std::size_t i = 0; i < s.size(); ++i) {
    double const ph = 2.0 * pi * (s.k[i][0] * x[0] + s.k[i][1] * x[1] + s.k[i][2] * x[2]);
    acc += s.dcf[i] * Complex(std::cos(ph), std::sin(ph));
  }
  return acc;
}

/* FWHM along `dir` from the exact PSF rather than the raster; linear
 * interpolation between 1 px samples widens a lobe only a pixel or two
 * across by up to 20%.
 */
[[nodiscard]] inline double measure_fwhm(SampledKSpace const &s, Vec3 const &dir, double tol = 1e-4)
{
  double const half = 0.5 * std::abs(psf_value(s, {0.0, 0.0, 0.0}));
  auto at = [&](double r) { return std::abs(psf_value(s, {r * dir[0], r * dir[1], r * dir[2]})); };
  double lo = 0.0;
  double hi = 0.25;
  while (at(hi) > half) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) { throw RidgeNotFound("half maximum not reached"); }
  }
  while (hi - lo > tol) {
    double const mid = 0.5 * (lo + hi);
    (at(mid) > half ? lo : hi) = mid;
  }
  return lo + hi;
}

/* Gridded PSF of a 2D design. `density` multiplies the FOV handed to the
 * angular design (and its dcf) while the radial spacing stays tied to the
 * true FOV; density > 1 gives the angular-aliasing-free reference used by
 * the ridge and low-level aliasing measurements. dkr <= 0 means 1 / max FOV,
 * size 0 means default_psf_size.
 */
[[nodiscard]] inline GridVolume design_psf_2d(ShapeFn const &fov,
                                              ShapeFn const &kmax,
                                              ProjectionKind kind = ProjectionKind::Full,
                                              double density = 1.0,
                                              double dkr = 0.0,
                                              std::size_t size = 0,
                                              GriddingConfig const &cfg = {})
{
  ShapeFn const designed = fov.scaled(density);
  Design2DOptions opt;
  opt.width = kind == ProjectionKind::Full ? pi : 2.0 * pi;
  auto const set = design_2d(designed, kmax, opt);
  auto s = sample_projections(set, dkr > 0.0 ? dkr : max_radial_spacing(fov), kind);
  apply_dcf(s, angular_dcf_2d(set, designed));
  return compute_psf(s, make_dims(2, size ? size : default_psf_size(fov.max_value())), cfg);
}

// Design-side description of a 3D PR case.
struct Pr3DCase
{
  ShapeFn fov_theta;
  ShapeFn kmax_theta;
  ShapeFn fov_phi;
  Method method = Method::SpiralBased;
  ProjectionKind kind = ProjectionKind::Full;
  std::uint64_t seed = 0;

  [[nodiscard]] double max_fov() const { return std::max(fov_theta.max_value(), fov_phi.max_value()); }
};

[[nodiscard]] inline Trajectory3D design_pr3d(Pr3DCase const &c, double density = 1.0)
{
  ShapeFn const ft = c.fov_theta.scaled(density);
  ShapeFn const fp = c.fov_phi.scaled(density);
  return c.method == Method::ConesBased ? design_pr3d_cones(ft, c.kmax_theta, fp, c.kind, c.seed)
                                        : design_pr3d_spiral(ft, c.kmax_theta, fp, c.kind, c.seed);
}

// Samples of a 3D PR case with the full dcf applied; density as in design_psf_2d.
[[nodiscard]] inline SampledKSpace sample_pr3d(Pr3DCase const &c, double density = 1.0, double dkr = 0.0)
{
  auto const traj = design_pr3d(c, density);
  auto s = sample_projections(traj, dkr > 0.0 ? dkr : 1.0 / c.max_fov());
  apply_dcf(s, angular_dcf_3d(traj, c.fov_theta.scaled(density), c.fov_phi.scaled(density)));
  return s;
}

[[nodiscard]] inline GridVolume
design_psf_3d(Pr3DCase const &c, double density = 1.0, std::size_t size = 0, GriddingConfig const &cfg = {})
{
  return compute_psf(sample_pr3d(c, density), make_dims(3, size ? size : default_psf_size(c.max_fov())), cfg);
}

enum class RidgeLocate
{
  Onset,   // radius where the smoothed profile climbs back to the threshold
  Peak,    // first local maximum at or after the onset
  HalfRise // inner half-maximum radius of that first local maximum
};

struct RidgeOptions
{
  double threshold = 0.003; // fraction of |PSF(0)|
  double sigma = 1.5;       // px, Gaussian smoothing of |PSF| before the walk; 0 disables
  double step = 0.25;       // px
  double start = 0.0;       // px; 0 means 2 * fwhm along the direction
  RidgeLocate locate = RidgeLocate::HalfRise;
};

// |values| blurred by a separable Gaussian of width sigma (px) along every axis of the grid.
[[nodiscard]] inline GridVolume smoothed_magnitude(GridVolume const &g, double sigma)
{
  GridVolume out = g;
  for (auto &v : out.values) { v = std::abs(v); }
  if (!(sigma > 0.0)) { return out; }
  int const reach = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(static_cast<std::size_t>(2 * reach + 1));
  double total = 0.0;
  for (int i = -reach; i <= reach; ++i) {
    total += w[static_cast<std::size_t>(i + reach)] = std::exp(-0.5 * i * i / (sigma * sigma));
  }
  for (auto &x : w) { x /= total; }

  std::vector<double> line;
  std::vector<double> src(out.values.size());
  for (int axis = 0; axis < g.ndim; ++axis) {
    for (std::size_t i = 0; i < src.size(); ++i) { src[i] = out.values[i].real(); }
    std::array<std::size_t, 3> const d = g.dims;
    std::size_t const stride = axis == 0 ? 1 : axis == 1 ? d[0] : d[0] * d[1];
    auto const n = static_cast<long>(d[static_cast<std::size_t>(axis)]);
    for (std::size_t i = 0; i < src.size(); ++i) {
      auto const pos = static_cast<long>((i / stride) % d[static_cast<std::size_t>(axis)]);
      double acc = 0.0;
      for (int k = -reach; k <= reach; ++k) {
        long const q = pos + k;
        if (q < 0 || q >= n) { continue; }
        acc += w[static_cast<std::size_t>(k + reach)] * src[static_cast<std::size_t>(static_cast<long>(i) + k * static_cast<long>(stride))];
      }
      out.values[i] = acc;
    }
  }
  return out;
}

/* Aliasing ridge finder over one PSF.
 *
 * The walk runs over a smoothed |PSF|, optionally after subtracting a
 * reference PSF with the same radial samples and kmax but a much denser
 * angular design. The difference then holds the angular aliasing alone: the
 * main lobe, its ringing and the radial-sampling replica cancel. Starting at
 * `start` (default twice the FWHM), the walk first waits for the profile to
 * drop below threshold * |PSF(0)|, then reports where it climbs back
 * (Onset), or the first local maximum from there on (Peak).
 */
class RidgeFinder
{
public:
  explicit RidgeFinder(GridVolume const &psf, RidgeOptions const &opt = {})
      : psf_(psf), map_(smoothed_magnitude(psf, opt.sigma)), opt_(opt)
  {
  }

  RidgeFinder(GridVolume const &psf, GridVolume const &reference, RidgeOptions const &opt = {}) : psf_(psf), opt_(opt)
  {
    if (reference.dims != psf.dims) { throw SpecError("reference PSF frame differs from the PSF frame"); }
    GridVolume alias = psf;
    for (std::size_t i = 0; i < alias.values.size(); ++i) { alias.values[i] -= reference.values[i]; }
    map_ = smoothed_magnitude(alias, opt.sigma);
  }

  [[nodiscard]] double fwhm(Vec3 const &dir) const { return measure_fwhm(psf_, dir); }

  [[nodiscard]] double operator()(Vec3 const &dir) const
  {
    double const level = opt_.threshold * std::abs(psf_.origin());
    double const start = opt_.start > 0.0 ? opt_.start : 2.0 * fwhm(dir);
    auto value = [&](double r) { return magnitude_at(map_, {r * dir[0], r * dir[1], r * dir[2]}); };

    bool below = false;
    double prev = value(start);
    for (double r = start + opt_.step;; r += opt_.step) {
      double const v = value(r);
      if (v < 0.0) { break; }
      if (!below) {
        below = v < level;
      } else if (v >= level) {
        if (opt_.locate == RidgeLocate::Onset) { return r - opt_.step * (v - level) / (v - prev); }
        double const top = peak_from(r, value);
        if (opt_.locate == RidgeLocate::Peak) { return top; }
        return half_rise(top, value);
      }
      prev = v;
    }
    throw RidgeNotFound("no aliasing ridge above threshold inside the frame");
  }

private:
  template <typename Fn> double half_rise(double top, Fn const &value) const
  {
    double const half = 0.5 * value(top);
    double r = top;
    double v = value(r);
    while (v > half) {
      double const prev = v;
      r -= opt_.step;
      v = value(r);
      if (v <= half) { return r + opt_.step * (half - v) / (prev - v); }
    }
    return r;
  }

  template <typename Fn> double peak_from(double r, Fn const &value) const
  {
    double a = value(r - opt_.step);
    double b = value(r);
    for (;; r += opt_.step) {
      double const c = value(r + opt_.step);
      if (c < 0.0) { throw RidgeNotFound("aliasing ridge runs past the frame edge"); }
      if (b >= a && b > c) {
        double const denom = a - 2.0 * b + c;
        return r + (denom != 0.0 ? 0.5 * (a - c) / denom : 0.0) * opt_.step;
      }
      a = b;
      b = c;
    }
  }

  GridVolume psf_;
  GridVolume map_;
  RidgeOptions opt_;
};

[[nodiscard]] inline double measure_ridge(GridVolume const &psf, Vec3 const &dir, RidgeOptions const &opt = {})
{
  return RidgeFinder(psf, opt)(dir);
}

// Ridge radius per in-plane direction psi (radians).
[[nodiscard]] inline std::vector<double> measure_ridges(RidgeFinder const &finder, std::vector<double> const &directions)
{
  std::vector<double> out;
  out.reserve(directions.size());
  for (double psi : directions) { out.push_back(finder(direction_2d(psi))); }
  return out;
}

[[nodiscard]] inline std::vector<double>
measure_ridges(GridVolume const &psf, std::vector<double> const &directions, RidgeOptions const &opt = {})
{
  return measure_ridges(RidgeFinder(psf, opt), directions);
}

/* Low-level aliasing power of a design PSF: the energy of the angular
 * aliasing (PSF minus the dense-angle reference) strictly inside the FOV
 * shrunk to 95%, outside the main-lobe disk of radius two nominal
 * resolutions, over the PSF energy inside that disk. The reference cancels
 * the design's own sidelobes, which would otherwise dominate. 2D only.
 */
[[nodiscard]] inline double
lowlevel_alias_power(GridVolume const &psf, GridVolume const &reference, ShapeFn const &fov, double lobe_radius = 2.0)
{
  if (psf.ndim != 2) { throw SpecError("low-level aliasing power is measured on 2D PSFs"); }
  if (reference.dims != psf.dims) { throw SpecError("reference PSF frame differs from the PSF frame"); }
  double inside = 0.0;
  double lobe = 0.0;
  long const cx = psf.centre(0);
  long const cy = psf.centre(1);
  for (long y = -cy; y < static_cast<long>(psf.dims[1]) - cy; ++y) {
    for (long x = -cx; x < static_cast<long>(psf.dims[0]) - cx; ++x) {
      auto const i = psf.index(x, y);
      double const r = std::hypot(static_cast<double>(x), static_cast<double>(y));
      if (r <= lobe_radius) {
        lobe += std::norm(psf.values[i]);
      } else if (r < 0.95 * fov(std::atan2(static_cast<double>(y), static_cast<double>(x)))) {
        inside += std::norm(psf.values[i] - reference.values[i]);
      }
    }
  }
  return inside / lobe;
}

// Largest |PSF - reference| over the same region, as a fraction of |PSF(0)|.
[[nodiscard]] inline double
inband_alias_peak(GridVolume const &psf, GridVolume const &reference, ShapeFn const &fov, double lobe_radius = 2.0)
{
  if (psf.ndim != 2) { throw SpecError("in-band alias peak is measured on 2D PSFs"); }
  if (reference.dims != psf.dims) { throw SpecError("reference PSF frame differs from the PSF frame"); }
  double peak = 0.0;
  long const cx = psf.centre(0);
  long const cy = psf.centre(1);
  for (long y = -cy; y < static_cast<long>(psf.dims[1]) - cy; ++y) {
    for (long x = -cx; x < static_cast<long>(psf.dims[0]) - cx; ++x) {
      double const r = std::hypot(static_cast<double>(x), static_cast<double>(y));
      if (r > lobe_radius && r < 0.95 * fov(std::atan2(static_cast<double>(y), static_cast<double>(x)))) {
        auto const i = psf.index(x, y);
        peak = std::max(peak, std::abs(psf.values[i] - reference.values[i]));
      }
    }
  }
  return peak / std::abs(psf.origin());
}

// Low-level aliasing of a 2D design with its own 4x angular-density reference.
[[nodiscard]] inline double lowlevel_alias_power(ShapeFn const &fov, ShapeFn const &kmax, std::size_t size = 0)
{
  std::size_t const n = size ? size : default_psf_size(fov.max_value());
  auto const psf = design_psf_2d(fov, kmax, ProjectionKind::Full, 1.0, 0.0, n);
  auto const ref = design_psf_2d(fov, kmax, ProjectionKind::Full, 4.0, 0.0, n);
  return lowlevel_alias_power(psf, ref, fov, 2.0 * resolution_for(kmax.max_value()));
}

// Fraction of projections saved by kmax_var over kmax_iso on the same FOV.
[[nodiscard]] inline double variable_kmax_savings(ShapeFn const &fov, ShapeFn const &kmax_var, ShapeFn const &kmax_iso)
{
  auto const iso = static_cast<double>(design_2d(fov, kmax_iso).size());
  auto const var = static_cast<double>(design_2d(fov, kmax_var).size());
  return (iso - var) / iso;
}

[[nodiscard]] inline double variable_kmax_savings(Pr3DCase const &with_var, ShapeFn const &kmax_iso)
{
  Pr3DCase iso = with_var;
  iso.kmax_theta = kmax_iso;
  auto const n_iso = static_cast<double>(design_pr3d(iso).size());
  auto const n_var = static_cast<double>(design_pr3d(with_var).size());
  return (n_iso - n_var) / n_iso;
}

/* Volume (px^3) of the 3D PR FOV: the body of revolution of the polar shape
 * intersected with the z-invariant azimuthal shape. In spherical coordinates
 * the boundary sits at min(r_theta(theta), r_phi(phi) / sin(theta)), where
 * r is half the chord.
 */
[[nodiscard]] inline double pr3d_volume(ShapeFn const &fov_theta, ShapeFn const &fov_phi, int steps = 720)
{
  double const dt = pi / steps;
  double const dp = 2.0 * pi / steps;
  std::vector<double> rp(static_cast<std::size_t>(steps));
  for (int j = 0; j < steps; ++j) { rp[static_cast<std::size_t>(j)] = 0.5 * fov_phi((j + 0.5) * dp); }
  double sum = 0.0;
  for (int i = 0; i < steps; ++i) {
    double const t = (i + 0.5) * dt;
    double const st = std::sin(t);
    double const rt = 0.5 * fov_theta(t);
    for (double r_phi : rp) {
      double const r = std::min(rt, r_phi / st);
      sum += r * r * r * st;
    }
  }
  return sum * dt * dp / 3.0;
}

struct EfficiencyPoint
{
  std::string shape;
  double size = 0.0;    // family parameter
  double measure = 0.0; // area (px^2) or volume (px^3)
  std::size_t count = 0;
};

// 2D family: size -> FOV shape; one point per size with kmax fixed.
template <typename Family>
[[nodiscard]] std::vector<EfficiencyPoint>
efficiency_curve_2d(std::string const &name, Family const &family, std::vector<double> const &sizes, ShapeFn const &kmax)
{
  std::vector<EfficiencyPoint> out;
  for (double sz : sizes) {
    ShapeFn const fov = family(sz);
    out.push_back({name, sz, shape_area(fov), design_2d(fov, kmax).size()});
  }
  return out;
}

// 3D family: size -> Pr3DCase.
template <typename Family>
[[nodiscard]] std::vector<EfficiencyPoint>
efficiency_curve_3d(std::string const &name, Family const &family, std::vector<double> const &sizes)
{
  std::vector<EfficiencyPoint> out;
  for (double sz : sizes) {
    Pr3DCase const c = family(sz);
    out.push_back({name, sz, pr3d_volume(c.fov_theta, c.fov_phi), design_pr3d(c).size()});
  }
  return out;
}

struct PowerFit
{
  double coefficient = 0.0; // N = coefficient * measure^exponent
  double exponent = 0.0;
  double r_squared = 0.0;
};

// Least-squares fit of N = c * measure^exponent through the origin, with R^2 about the mean.
[[nodiscard]] inline PowerFit fit_power(std::vector<EfficiencyPoint> const &pts, double exponent)
{
  double sxy = 0.0;
  double sxx = 0.0;
  double mean = 0.0;
  for (auto const &p : pts) {
    double const x = std::pow(p.measure, exponent);
    auto const y = static_cast<double>(p.count);
    sxy += x * y;
    sxx += x * x;
    mean += y;
  }
  mean /= static_cast<double>(pts.size());
  double const c = sxy / sxx;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (auto const &p : pts) {
    auto const y = static_cast<double>(p.count);
    double const e = y - c * std::pow(p.measure, exponent);
    ss_res += e * e;
    ss_tot += (y - mean) * (y - mean);
  }
  return {c, exponent, ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0};
}

/* Uniform ellipse (2D) or ellipsoid (3D) with constant amplitude. */
struct EllipsoidPhantom
{
  double amplitude = 1.0;
  Vec3 centre{0.0, 0.0, 0.0};
  Vec3 semi_axes{1.0, 1.0, 1.0}; // px; the z axis is ignored in 2D

  // Normalised radius: 1 on the boundary.
  [[nodiscard]] double level(Vec3 const &x, int ndim) const
  {
    double acc = 0.0;
    for (int d = 0; d < ndim; ++d) {
      double const u = (x[d] - centre[d]) / semi_axes[d];
      acc += u * u;
    }
    return std::sqrt(acc);
  }
};

/* Closed-form Fourier transform, forward sign exp(-2 pi i k.x). With
 * q = |(a kx, b ky[, c kz])|: a b J1(2 pi q) / q in 2D and
 * a b c (sin(2 pi q) - 2 pi q cos(2 pi q)) / (2 pi^2 q^3) in 3D.
 */
[[nodiscard]] inline Complex phantom_ft(EllipsoidPhantom const &ph, std::array<double, 3> const &k, int ndim)
{
  double q2 = 0.0;
  double scale = ph.amplitude;
  double shift = 0.0;
  for (int d = 0; d < ndim; ++d) {
    double const u = ph.semi_axes[d] * k[d];
    q2 += u * u;
    scale *= ph.semi_axes[d];
    shift += k[d] * ph.centre[d];
  }
  double const q = std::sqrt(q2);
  double mag = 0.0;
  if (ndim == 2) {
    mag = q < 1e-9 ? pi : std::cyl_bessel_j(1.0, 2.0 * pi * q) / q;
  } else {
    double const t = 2.0 * pi * q;
    mag = t < 1e-3 ? 4.0 * pi / 3.0 * (1.0 - t * t / 10.0) : (std::sin(t) - t * std::cos(t)) / (2.0 * pi * pi * q * q * q);
  }
  double const ph_angle = -2.0 * pi * shift;
  return scale * mag * Complex(std::cos(ph_angle), std::sin(ph_angle));
}

struct PhantomResult
{
  double peak_inband_alias = 0.0; // fraction of the phantom amplitude
  bool alias_free = false;
  std::size_t voxels = 0; // voxels inside the eroded phantom
};

struct PhantomOptions
{
  double erode = 0.8;        // interior = normalised radius <= erode
  double alias_free_level = 0.02;
  GriddingConfig gridding = {};
};

/* Reconstructs the phantom from both sample sets and compares them inside
 * the eroded phantom. The reference set has the same radial samples and a
 * much denser angular design, so the difference is the angular aliasing that
 * lands on the object; ringing common to both cancels.
 */
[[nodiscard]] inline PhantomResult phantom_experiment(SampledKSpace const &samples,
                                                      SampledKSpace const &reference,
                                                      EllipsoidPhantom const &phantom,
                                                      std::array<std::size_t, 3> dims,
                                                      PhantomOptions const &opt = {})
{
  if (samples.ndim != reference.ndim) { throw SpecError("sample sets differ in dimensionality"); }
  int const nd = samples.ndim;
  auto recon = [&](SampledKSpace const &s) {
    std::vector<Complex> data(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) { data[i] = phantom_ft(phantom, s.k[i], nd); }
    return grid_reconstruct(s, data, dims, opt.gridding);
  };
  auto const img = recon(samples);
  auto const ref = recon(reference);

  PhantomResult out;
  long const cx = img.centre(0);
  long const cy = img.centre(1);
  long const cz = img.centre(2);
  for (long z = -cz; z < static_cast<long>(img.dims[2]) - cz; ++z) {
    for (long y = -cy; y < static_cast<long>(img.dims[1]) - cy; ++y) {
      for (long x = -cx; x < static_cast<long>(img.dims[0]) - cx; ++x) {
        Vec3 const pos{static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
        if (phantom.level(pos, nd) > opt.erode) { continue; }
        auto const i = img.index(x, y, z);
        out.peak_inband_alias = std::max(out.peak_inband_alias, std::abs(img.values[i] - ref.values[i]));
        ++out.voxels;
      }
    }
  }
  out.peak_inband_alias /= std::abs(phantom.amplitude);
  out.alias_free = out.peak_inband_alias < opt.alias_free_level;
  return out;
}

// Default probe directions: 10 degree steps over a full turn.
[[nodiscard]] inline std::vector<double> probe_directions(int count = 36)
{
  std::vector<double> d(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) { d[static_cast<std::size_t>(i)] = 2.0 * pi * i / count; }
  return d;
}

} // namespace radfov
