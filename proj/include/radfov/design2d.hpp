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
#include "shapes.hpp"

#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

namespace radfov {

// Anything callable as double(double): ShapeFn, lambdas, constants wrapped in lambdas.
template <typename F>
concept AngularFn = std::invocable<F const &, double> && std::convertible_to<std::invoke_result_t<F const &, double>, double>;

// Constant angular function, used for fixed extents.
struct Constant
{
  double value;
  [[nodiscard]] double operator()(double) const { return value; }
};

struct ParityRule
{
  enum class Kind
  {
    Any,
    Even,
    Odd,
    MultipleOf
  };
  Kind kind = Kind::Any;
  int multiple = 1;

  [[nodiscard]] static ParityRule any() { return {}; }
  [[nodiscard]] static ParityRule even() { return {Kind::Even, 2}; }
  [[nodiscard]] static ParityRule odd() { return {Kind::Odd, 2}; }
  [[nodiscard]] static ParityRule multiple_of(int m)
  {
    if (m < 1) { throw SpecError("parity multiple must be >= 1"); }
    return {Kind::MultipleOf, m};
  }

  [[nodiscard]] std::size_t modulus() const { return kind == Kind::Any ? 1 : static_cast<std::size_t>(multiple); }
  [[nodiscard]] std::size_t residue() const { return kind == Kind::Odd ? 1 : 0; }
  [[nodiscard]] bool admits(std::size_t n) const { return n % modulus() == residue(); }
};

struct Design2DOptions
{
  double phi0 = 0.0;
  double width = pi;
  ParityRule parity = {};
  // Designed gaps wider than this (radians) mean the shape is too small for
  // the extent: fov * kmax < 1/max_gap somewhere. The per-cone azimuthal
  // designs near the pole legitimately have few spokes and disable the check.
  double max_gap = 0.5;
};

struct ProjectionSet2D
{
  std::vector<double> angles;  // radians, strictly increasing, angles[0] == phi0
  std::vector<double> extents; // cycles/px, extents[n] == kmax(angles[n])
  double scale = 1.0;          // S, applied to the designed angles
  double phi0 = 0.0;
  double width = pi;
  double max_designed_gap = 0.0; // largest pre-scaling gap

  [[nodiscard]] std::size_t size() const { return angles.size(); }
};

// Reference projection count of an isotropic design, FOV = N / (pi kmax).
[[nodiscard]] inline double isotropic_count(double fov, double kmax) { return pi * kmax * fov; }

/* Generalised anisotropic-FOV radial design.
 *
 * Angles are generated sequentially: the gap after theta is estimated from the
 * FOV perpendicular to theta, then recomputed at the estimated mid-angle. The
 * sequence stops once it passes phi0 + width. The end point closest to
 * phi0 + width decides N (ties keep the larger N), and the first N angles are
 * stretched by S so that they exactly tile the width. A parity rule moves N to
 * the nearest admissible count (ties upward) and recomputes S to match.
 */
template <AngularFn Fov, AngularFn Kmax>
[[nodiscard]] ProjectionSet2D design_2d(Fov const &fov, Kmax const &kmax, Design2DOptions const &opt = {})
{
  if (!(opt.width > 0.0) || opt.width > 2.0 * pi + 1e-12) { throw SpecError("design width must lie in (0, 2pi]"); }
  if (!std::isfinite(opt.phi0)) { throw SpecError("phi0 must be finite"); }

  double const end = opt.phi0 + opt.width;
  double const quarter = 0.5 * pi;
  double max_gap = 0.0;

  auto gap_after = [&](double theta) {
    double const estimate = 1.0 / (kmax(theta) * fov(theta + quarter));
    double const mid = theta + 0.5 * estimate;
    double const gap = 1.0 / (kmax(mid) * fov(mid + quarter));
    if (!(gap > 0.0) || !std::isfinite(gap)) { throw DegenerateShape("non-positive or non-finite angular gap"); }
    if (gap > opt.max_gap) {
      throw DegenerateShape("angular gap " + std::to_string(gap) + " rad exceeds " + std::to_string(opt.max_gap) +
                            " rad; FOV too small for the projection extent");
    }
    max_gap = std::max(max_gap, gap);
    return gap;
  };

  // Hard cap on the recurrence length; a legitimate design is far smaller.
  constexpr std::size_t limit = 50'000'000;
  std::vector<double> theta{opt.phi0};
  auto extend = [&] {
    if (theta.size() >= limit) { throw DegenerateShape("angular design did not terminate"); }
    theta.push_back(theta.back() + gap_after(theta.back()));
  };
  while (theta.back() <= end) { extend(); }

  std::size_t const n = theta.size(); // theta[n-1] > end >= theta[n-2]
  std::size_t count = (theta[n - 1] - end <= end - theta[n - 2]) ? n - 1 : n - 2;

  if (opt.parity.kind != ParityRule::Kind::Any) {
    std::size_t const m = opt.parity.modulus();
    std::size_t const r = opt.parity.residue();
    if (count < r) {
      count = r;
    } else {
      std::size_t const lower = count - ((count - r) % m);
      std::size_t const upper = lower + m;
      bool const prefer_upper = (lower < 2) || (upper - count <= count - lower);
      count = prefer_upper ? upper : lower;
    }
  }
  while (theta.size() <= count) { extend(); }

  if (count < 2) { throw DegenerateShape("design produced fewer than 2 projections"); }

  ProjectionSet2D out;
  out.phi0 = opt.phi0;
  out.width = opt.width;
  out.scale = opt.width / (theta[count] - opt.phi0);
  out.max_designed_gap = max_gap;
  out.angles.resize(count);
  out.extents.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.angles[i] = out.scale * (theta[i] - opt.phi0) + opt.phi0;
    out.extents[i] = kmax(out.angles[i]);
  }
  return out;
}

} // namespace radfov
