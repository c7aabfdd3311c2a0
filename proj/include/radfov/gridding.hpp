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
#include "sampling.hpp"
#include "shapes.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace radfov {

using Complex = std::complex<double>;

/* Complex raster on a 1 px pitch, x fastest. The physical origin sits at
 * index floor(N/2) on every axis. Unused trailing dims are 1.
 */
struct GridVolume
{
  std::array<std::size_t, 3> dims{1, 1, 1};
  int ndim = 2;
  std::vector<Complex> values;

  GridVolume() = default;
  GridVolume(int nd, std::array<std::size_t, 3> d)
    : dims(d)
    , ndim(nd)
    , values(d[0] * d[1] * d[2])
  {
  }

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] long centre(int axis) const { return static_cast<long>(dims[axis] / 2); }

  // Index from physical coordinates relative to the centre.
  [[nodiscard]] std::size_t index(long x, long y, long z = 0) const
  {
    auto const ix = static_cast<std::size_t>(x + centre(0));
    auto const iy = static_cast<std::size_t>(y + centre(1));
    auto const iz = static_cast<std::size_t>(z + centre(2));
    return (iz * dims[1] + iy) * dims[0] + ix;
  }

  [[nodiscard]] bool contains(long x, long y, long z = 0) const
  {
    return x + centre(0) >= 0 && x + centre(0) < static_cast<long>(dims[0]) && y + centre(1) >= 0 &&
           y + centre(1) < static_cast<long>(dims[1]) && z + centre(2) >= 0 &&
           z + centre(2) < static_cast<long>(dims[2]);
  }

  [[nodiscard]] Complex at(long x, long y, long z = 0) const { return values[index(x, y, z)]; }
  [[nodiscard]] Complex origin() const { return at(0, 0, 0); }
};

[[nodiscard]] inline std::array<std::size_t, 3> make_dims(int ndim, std::size_t n)
{
  return {n, ndim >= 2 ? n : 1, ndim >= 3 ? n : 1};
}

/* Kaiser-Bessel gridding parameters. The shape parameter follows the
 * minimal-oversampling rule
 *   beta = pi * sqrt((W / alpha)^2 (alpha - 1/2)^2 - 0.8)
 * for kernel width W (oversampled grid units) and oversampling alpha.
 */
struct GriddingConfig
{
  double oversampling = 1.5;
  double width = 6.0;
  bool deapodize = true;

  [[nodiscard]] double beta() const
  {
    double const a = width / oversampling * (oversampling - 0.5);
    return pi * std::sqrt(a * a - 0.8);
  }

  void validate() const
  {
    if (oversampling < 1.25 - 1e-12 || oversampling > 2.0 + 1e-12) {
      throw SpecError("oversampling must lie in [1.25, 2]");
    }
    if (!(width >= 2.0) || width > 8.0) { throw SpecError("kernel width must lie in [2, 8]"); }
  }

  // Oversampled size, rounded up to even.
  [[nodiscard]] std::size_t grid_size(std::size_t n) const
  {
    if (n <= 1) { return 1; }
    auto g = static_cast<std::size_t>(std::ceil(oversampling * static_cast<double>(n) - 1e-9));
    return g + (g % 2);
  }
};

namespace detail {

inline double kb_kernel(double offset, double width, double beta)
{
  double const u = 2.0 * offset / width;
  if (std::abs(u) >= 1.0) { return 0.0; }
  return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - u * u));
}

// Continuous Fourier transform of kb_kernel at frequency nu (cycles per grid cell).
inline double kb_transform(double nu, double width, double beta)
{
  double const a = pi * width * nu;
  double const d = beta * beta - a * a;
  if (d > 1e-12) {
    double const r = std::sqrt(d);
    return width * std::sinh(r) / r;
  }
  if (d < -1e-12) {
    double const r = std::sqrt(-d);
    return width * std::sin(r) / r;
  }
  return width;
}

struct FftwPlanDeleter
{
  void operator()(fftw_plan_s *p) const { fftw_destroy_plan(p); }
};

inline void inverse_fft(std::vector<Complex> &data, std::array<std::size_t, 3> const &g, int ndim)
{
  // FFTW wants the slowest dimension first.
  std::array<int, 3> n{};
  for (int d = 0; d < ndim; ++d) { n[d] = static_cast<int>(g[ndim - 1 - d]); }
  auto *ptr = reinterpret_cast<fftw_complex *>(data.data());
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(
    fftw_plan_dft(ndim, n.data(), ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE));
  fftw_execute(plan.get());
}

} // namespace detail

/* Convolution gridding reconstruction,
 *   image(x) = sum_s dcf_s * data_s * exp(2 pi i k_s . x),
 * approximated by Kaiser-Bessel interpolation onto an oversampled Cartesian
 * grid, an inverse FFT, deapodisation and cropping to `dims`. An empty `data`
 * span grids ones (a PSF).
 */
[[nodiscard]] inline GridVolume grid_reconstruct(SampledKSpace const &samples,
                                                 std::span<Complex const> data,
                                                 std::array<std::size_t, 3> dims,
                                                 GriddingConfig const &cfg = {})
{
  cfg.validate();
  int const nd = samples.ndim;
  if (!data.empty() && data.size() != samples.size()) { throw SpecError("data length does not match sample count"); }
  for (int d = nd; d < 3; ++d) { dims[d] = 1; }

  std::array<std::size_t, 3> g{1, 1, 1};
  for (int d = 0; d < nd; ++d) { g[d] = cfg.grid_size(dims[d]); }
  std::vector<Complex> grid(g[0] * g[1] * g[2]);

  double const beta = cfg.beta();
  double const half = 0.5 * cfg.width;
  int const taps = static_cast<int>(std::floor(cfg.width)) + 1;
  std::array<std::array<double, 16>, 3> w{};
  std::array<std::array<std::size_t, 16>, 3> idx{};
  std::array<int, 3> count{1, 1, 1};

  for (std::size_t s = 0; s < samples.size(); ++s) {
    auto const &k = samples.k[s];
    double const kr = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    if (kr > 0.5 + 1e-12) { throw OutOfBand("sample " + std::to_string(s) + " lies outside |k| <= 0.5 cycles/px"); }
    for (int d = 0; d < nd; ++d) {
      double const gd = static_cast<double>(g[d]);
      double const u = k[d] * gd + 0.5 * gd;
      long const first = static_cast<long>(std::ceil(u - half));
      count[d] = 0;
      for (int t = 0; t < taps; ++t) {
        long const i = first + t;
        double const off = static_cast<double>(i) - u;
        if (off > half) { break; }
        w[d][count[d]] = detail::kb_kernel(off, cfg.width, beta);
        long wrapped = i % static_cast<long>(g[d]);
        if (wrapped < 0) { wrapped += static_cast<long>(g[d]); }
        idx[d][count[d]] = static_cast<std::size_t>(wrapped);
        ++count[d];
      }
    }
    Complex const value = (data.empty() ? Complex(1.0, 0.0) : data[s]) * samples.dcf[s];
    for (int c = 0; c < count[2]; ++c) {
      double const wz = nd >= 3 ? w[2][c] : 1.0;
      std::size_t const oz = nd >= 3 ? idx[2][c] * g[1] * g[0] : 0;
      for (int b = 0; b < count[1]; ++b) {
        double const wyz = wz * (nd >= 2 ? w[1][b] : 1.0);
        std::size_t const oy = oz + (nd >= 2 ? idx[1][b] * g[0] : 0);
        Complex const vy = value * wyz;
        for (int a = 0; a < count[0]; ++a) { grid[oy + idx[0][a]] += vy * w[0][a]; }
      }
    }
  }

  detail::inverse_fft(grid, g, nd);

  // The grid index i holds frequency (i - G/2)/G, so the transform at x picks
  // up a factor (-1)^x.
  std::array<std::vector<double>, 3> axis_scale;
  for (int d = 0; d < 3; ++d) {
    axis_scale[d].resize(dims[d]);
    long const c = static_cast<long>(dims[d] / 2);
    for (std::size_t i = 0; i < dims[d]; ++i) {
      long const x = static_cast<long>(i) - c;
      double v = (x % 2 == 0) ? 1.0 : -1.0;
      if (d < nd && cfg.deapodize) { v /= detail::kb_transform(static_cast<double>(x) / static_cast<double>(g[d]), cfg.width, beta); }
      if (d >= nd) { v = 1.0; }
      axis_scale[d][i] = v;
    }
  }

  GridVolume out(nd, dims);
  for (std::size_t iz = 0; iz < dims[2]; ++iz) {
    long const z = static_cast<long>(iz) - static_cast<long>(dims[2] / 2);
    std::size_t const gz = static_cast<std::size_t>((z % static_cast<long>(g[2]) + static_cast<long>(g[2])) % static_cast<long>(g[2]));
    for (std::size_t iy = 0; iy < dims[1]; ++iy) {
      long const y = static_cast<long>(iy) - static_cast<long>(dims[1] / 2);
      std::size_t const gy = static_cast<std::size_t>((y % static_cast<long>(g[1]) + static_cast<long>(g[1])) % static_cast<long>(g[1]));
      double const syz = axis_scale[2][iz] * axis_scale[1][iy];
      for (std::size_t ix = 0; ix < dims[0]; ++ix) {
        long const x = static_cast<long>(ix) - static_cast<long>(dims[0] / 2);
        std::size_t const gx = static_cast<std::size_t>((x % static_cast<long>(g[0]) + static_cast<long>(g[0])) % static_cast<long>(g[0]));
        out.values[(iz * dims[1] + iy) * dims[0] + ix] = grid[(gz * g[1] + gy) * g[0] + gx] * (syz * axis_scale[0][ix]);
      }
    }
  }
  return out;
}

// Brute-force evaluation of the same sum, for small instances.
[[nodiscard]] inline GridVolume
direct_dft(SampledKSpace const &samples, std::span<Complex const> data, std::array<std::size_t, 3> dims)
{
  int const nd = samples.ndim;
  for (int d = nd; d < 3; ++d) { dims[d] = 1; }
  GridVolume out(nd, dims);
  for (std::size_t iz = 0; iz < dims[2]; ++iz) {
    double const z = static_cast<double>(iz) - static_cast<double>(dims[2] / 2);
    for (std::size_t iy = 0; iy < dims[1]; ++iy) {
      double const y = static_cast<double>(iy) - static_cast<double>(dims[1] / 2);
      for (std::size_t ix = 0; ix < dims[0]; ++ix) {
        double const x = static_cast<double>(ix) - static_cast<double>(dims[0] / 2);
        Complex acc{};
        for (std::size_t s = 0; s < samples.size(); ++s) {
          auto const &k = samples.k[s];
          double const phase = 2.0 * pi * (k[0] * x + k[1] * y + k[2] * z);
          Complex const v = data.empty() ? Complex(1.0, 0.0) : data[s];
          acc += v * samples.dcf[s] * Complex(std::cos(phase), std::sin(phase));
        }
        out.values[(iz * dims[1] + iy) * dims[0] + ix] = acc;
      }
    }
  }
  return out;
}

// PSF frame: next even integer >= 2.4 max(FOV).
[[nodiscard]] inline std::size_t default_psf_size(double max_fov)
{
  auto n = static_cast<std::size_t>(std::ceil(2.4 * max_fov - 1e-9));
  return n + (n % 2);
}

// Gridded unit data with the samples' dcf applied.
[[nodiscard]] inline GridVolume
compute_psf(SampledKSpace const &samples, std::array<std::size_t, 3> dims, GriddingConfig const &cfg = {})
{
  return grid_reconstruct(samples, {}, dims, cfg);
}

} // namespace radfov
