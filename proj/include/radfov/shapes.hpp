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

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace radfov {

inline constexpr double pi = std::numbers::pi;

/* Canonical units: lengths are in pixels of the nominal resolution, spatial
 * frequencies in cycles/px. A projection extent of 0.5 cycles/px therefore
 * resolves one pixel, res = 1 / (2 kmax).
 */
inline constexpr double nominal_kmax = 0.5;

[[nodiscard]] inline double resolution_for(double kmax) { return 1.0 / (2.0 * kmax); }

enum class ShapeKind
{
  Circle,
  Ellipse,
  Rectangle,
  Diamond,
  Stadium,
  Star,
  Tabulated
};

[[nodiscard]] inline std::string_view to_string(ShapeKind k)
{
  switch (k) {
  case ShapeKind::Circle: return "circle";
  case ShapeKind::Ellipse: return "ellipse";
  case ShapeKind::Rectangle: return "rect";
  case ShapeKind::Diamond: return "diamond";
  case ShapeKind::Stadium: return "oval";
  case ShapeKind::Star: return "star";
  case ShapeKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

/* An angular shape function f(phi) > 0.
 *
 * For FOV shapes the value is the full chord through the centre of a centrally
 * symmetric convex region along direction phi (the diameter function). The
 * same type carries k-space extent shapes kmax(phi), in which case the value is
 * the projection extent in cycles/px.
 *
 * Every shape satisfies f(phi) == f(phi + pi). A shape may carry a rotation
 * and a positive scale, f(phi) = scale * base(phi + rotation), which is how
 * dual shapes and polar-plane views are expressed without new kinds.
 */
class ShapeFn
{
public:
  static ShapeFn circle(double diameter)
  {
    ShapeFn s(ShapeKind::Circle, diameter, diameter);
    return s;
  }

  static ShapeFn ellipse(double wx, double wy) { return ShapeFn(ShapeKind::Ellipse, wx, wy); }
  static ShapeFn rectangle(double wx, double wy) { return ShapeFn(ShapeKind::Rectangle, wx, wy); }
  static ShapeFn diamond(double wx, double wy) { return ShapeFn(ShapeKind::Diamond, wx, wy); }

  // Rectangle of length wx - wy capped by semicircles of diameter wy.
  static ShapeFn stadium(double wx, double wy)
  {
    if (wx < wy) {
      throw SpecError("stadium requires wx >= wy (got wx=" + std::to_string(wx) + ", wy=" + std::to_string(wy) + ")");
    }
    return ShapeFn(ShapeKind::Stadium, wx, wy);
  }

  // f(phi) = lo + (hi - lo) |cos(lobes/2 * phi)|. `lobes` must be even so the
  // shape stays centrally symmetric; 4 lobes gives the |cos 2phi| star.
  static ShapeFn star(double lo, double hi, int lobes = 4)
  {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
      throw SpecError("star requires 0 < lo <= hi");
    }
    if (lobes <= 0 || lobes % 2 != 0) { throw SpecError("star lobe count must be a positive even integer"); }
    ShapeFn s;
    s.kind_ = ShapeKind::Star;
    s.wx_ = lo;
    s.wy_ = hi;
    s.lobes_ = lobes;
    return s;
  }

  /* Uniform samples over [0, period), linearly interpolated with wrap-around.
   * The result is symmetrised, f(phi) <- (f(phi) + f(phi + pi)) / 2, so a
   * 2pi-periodic table still yields a centrally symmetric shape.
   */
  static ShapeFn tabulated(std::vector<double> values, double period = pi)
  {
    if (values.size() < 2) { throw SpecError("tabulated shape needs at least 2 samples"); }
    if (!(std::abs(period - pi) < 1e-12 || std::abs(period - 2 * pi) < 1e-12)) {
      throw SpecError("tabulated period must be pi or 2pi");
    }
    for (double v : values) {
      if (!(v > 0.0) || !std::isfinite(v)) { throw SpecError("tabulated values must be finite and positive"); }
    }
    ShapeFn s;
    s.kind_ = ShapeKind::Tabulated;
    s.table_ = std::move(values);
    s.period_ = period;
    return s;
  }

  [[nodiscard]] double operator()(double phi) const { return scale_ * base(phi + rotation_); }

  [[nodiscard]] double max_value() const { return scale_ * base_max(); }

  // Returns a copy with f'(phi) = f(phi + offset).
  [[nodiscard]] ShapeFn rotated(double offset) const
  {
    ShapeFn s = *this;
    s.rotation_ += offset;
    return s;
  }

  [[nodiscard]] ShapeFn scaled(double factor) const
  {
    if (!(factor > 0.0) || !std::isfinite(factor)) { throw SpecError("shape scale must be positive"); }
    ShapeFn s = *this;
    s.scale_ *= factor;
    return s;
  }

  [[nodiscard]] ShapeKind kind() const { return kind_; }
  [[nodiscard]] double wx() const { return wx_; }
  [[nodiscard]] double wy() const { return wy_; }
  [[nodiscard]] int lobes() const { return lobes_; }
  [[nodiscard]] double rotation() const { return rotation_; }
  [[nodiscard]] double scale() const { return scale_; }
  [[nodiscard]] double period() const { return period_; }
  [[nodiscard]] std::vector<double> const &table() const { return table_; }

  [[nodiscard]] bool isotropic() const
  {
    return kind_ == ShapeKind::Circle || (kind_ == ShapeKind::Star && wx_ == wy_) ||
           ((kind_ == ShapeKind::Ellipse || kind_ == ShapeKind::Stadium) && wx_ == wy_);
  }

private:
  ShapeFn() = default;

  ShapeFn(ShapeKind kind, double wx, double wy)
    : kind_(kind)
    , wx_(wx)
    , wy_(wy)
  {
    if (!(wx > 0.0) || !(wy > 0.0) || !std::isfinite(wx) || !std::isfinite(wy)) {
      throw SpecError(std::string(to_string(kind)) + " widths must be finite and positive");
    }
  }

  [[nodiscard]] double base(double phi) const
  {
    double const c = std::abs(std::cos(phi));
    double const s = std::abs(std::sin(phi));
    switch (kind_) {
    case ShapeKind::Circle: return wx_;
    case ShapeKind::Ellipse: return wx_ * wy_ / std::sqrt(wy_ * wy_ * c * c + wx_ * wx_ * s * s);
    case ShapeKind::Rectangle: {
      // min(wx/|cos|, wy/|sin|) written without the divisions by zero
      return (wx_ * s <= wy_ * c) ? wx_ / c : wy_ / s;
    }
    case ShapeKind::Diamond: return 1.0 / (c / wx_ + s / wy_);
    case ShapeKind::Stadium: {
      double const half_len = 0.5 * (wx_ - wy_);
      double const radius = 0.5 * wy_;
      // Ray leaves through the flat side while it is still over the segment.
      if (s > 0.0 && radius * c <= half_len * s) { return 2.0 * radius / s; }
      return 2.0 * (half_len * c + std::sqrt(std::max(0.0, radius * radius - half_len * half_len * s * s)));
    }
    case ShapeKind::Star: return wx_ + (wy_ - wx_) * std::abs(std::cos(0.5 * lobes_ * phi));
    case ShapeKind::Tabulated: return 0.5 * (table_at(phi) + table_at(phi + pi));
    }
    return 0.0;
  }

  [[nodiscard]] double table_at(double phi) const
  {
    auto const n = table_.size();
    double u = std::fmod(phi, period_);
    if (u < 0.0) { u += period_; }
    u *= static_cast<double>(n) / period_;
    auto i = static_cast<std::size_t>(u);
    double const t = u - static_cast<double>(i);
    i %= n;
    return (1.0 - t) * table_[i] + t * table_[(i + 1) % n];
  }

  [[nodiscard]] double base_max() const
  {
    switch (kind_) {
    case ShapeKind::Circle: return wx_;
    case ShapeKind::Ellipse:
    case ShapeKind::Diamond: return std::max(wx_, wy_);
    case ShapeKind::Rectangle: return std::hypot(wx_, wy_);
    case ShapeKind::Stadium: return wx_;
    case ShapeKind::Star: return wy_;
    case ShapeKind::Tabulated: {
      // The symmetrised interpolant is piecewise linear with breakpoints at
      // the nodes and the nodes shifted by pi.
      double best = 0.0;
      double const step = period_ / static_cast<double>(table_.size());
      for (std::size_t i = 0; i < table_.size(); ++i) {
        double const phi = step * static_cast<double>(i);
        best = std::max({best, base(phi), base(phi + pi)});
      }
      return best;
    }
    }
    return 0.0;
  }

  ShapeKind kind_ = ShapeKind::Circle;
  double wx_ = 1.0;
  double wy_ = 1.0;
  int lobes_ = 0;
  double period_ = pi;
  std::vector<double> table_;
  double rotation_ = 0.0;
  double scale_ = 1.0;
};

/* k(phi) = c * fov(phi + pi/2), with c chosen so that max_phi k(phi) equals
 * `peak_kmax`. Sampling with the dual extent gives a uniform angular dcf.
 */
[[nodiscard]] inline ShapeFn dual_shape(ShapeFn const &fov, double peak_kmax = nominal_kmax)
{
  ShapeFn const turned = fov.rotated(0.5 * pi);
  return turned.scaled(peak_kmax / turned.max_value());
}

// Largest radial sample spacing that does not restrict the FOV along the
// projections: 1 / max_phi fov(phi).
[[nodiscard]] inline double max_radial_spacing(ShapeFn const &fov) { return 1.0 / fov.max_value(); }

/* Shape drawn in the (rho, z) half-plane, with wx the transverse width and wy
 * the axial (z) width, viewed as a function of the polar angle theta measured
 * from +z. This is how polar FOV and polar kmax shapes enter the 3D designs.
 */
[[nodiscard]] inline ShapeFn polar_view(ShapeFn const &rho_z_shape) { return rho_z_shape.rotated(0.5 * pi); }

// Area enclosed by a FOV shape, from its chord function r(phi) = f(phi)/2.
[[nodiscard]] inline double shape_area(ShapeFn const &fov, int steps = 20000)
{
  double sum = 0.0;
  double const h = pi / steps;
  for (int i = 0; i < steps; ++i) {
    double const r = 0.5 * fov((i + 0.5) * h);
    sum += r * r;
  }
  // integral over [0, 2pi) of r^2/2 == integral over [0, pi) of r^2
  return sum * h;
}

} // namespace radfov
