#include <radfov/gridding.hpp>
#include <radfov/sampling.hpp>

#include <catch_amalgamated.hpp>

using namespace radfov;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

auto const k05 = ShapeFn::circle(0.5);

ProjectionSet2D single(std::vector<double> angles, double kmax)
{
  ProjectionSet2D set;
  set.angles = std::move(angles);
  set.extents.assign(set.angles.size(), kmax);
  return set;
}

} // namespace

TEST_CASE("radial samples along projections", "[sampling]")
{
  SECTION("one full projection")
  {
    auto const s = sample_projections(single({0.0}, 0.5), 0.01, ProjectionKind::Full);
    REQUIRE(s.size() == 101);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK_THAT(s.k[i][0], WithinAbs(-0.5 + 0.01 * static_cast<double>(i), 1e-12));
      CHECK(s.k[i][1] == 0.0);
    }
  }
  SECTION("two orthogonal projections form a plus sign")
  {
    auto const s = sample_projections(single({0.0, pi / 2}, 0.5), 0.05, ProjectionKind::Full);
    REQUIRE(s.size() == 2 * 21);
    for (std::size_t i = 0; i < s.size(); ++i) {
      bool const on_x = std::abs(s.k[i][1]) < 1e-12;
      bool const on_y = std::abs(s.k[i][0]) < 1e-12;
      CHECK((on_x || on_y));
      CHECK((s.projection[i] == 0 ? on_x : on_y));
    }
  }
  SECTION("circle-250 design at the default spacing")
  {
    auto const fov = ShapeFn::circle(250);
    auto const set = design_2d(fov, k05);
    auto const s = sample_projections(set, max_radial_spacing(fov), ProjectionKind::Full);
    CHECK(s.per_projection() == 251);
    CHECK(s.size() == 251 * set.size());
  }
  SECTION("half projections start at the origin")
  {
    auto const s = sample_projections(single({0.3}, 0.4), 0.01, ProjectionKind::Half);
    CHECK(s.size() == 41);
    CHECK(s.k.front()[0] == 0.0);
    CHECK_THAT(std::hypot(s.k.back()[0], s.k.back()[1]), WithinRel(0.4, 1e-12));
  }
}

TEST_CASE("projections share normalised radial positions", "[sampling]")
{
  auto const fov = ShapeFn::ellipse(200, 100);
  auto const set = design_2d(fov, dual_shape(fov));
  auto const s = sample_projections(set, max_radial_spacing(fov), ProjectionKind::Full);
  std::size_t const per = s.per_projection();
  for (std::size_t i = 0; i < s.size(); ++i) {
    double const kmax = set.extents[s.projection[i]];
    double const r = std::hypot(s.k[i][0], s.k[i][1]);
    CHECK(r <= kmax + 1e-12);
    double const j = static_cast<double>(static_cast<long>(i % per) + s.j_min());
    CHECK_THAT(r / kmax, WithinAbs(std::abs(j) / static_cast<double>(s.J), 1e-12));
  }
}

TEST_CASE("radial spacing bound", "[sampling]")
{
  auto const set = design_2d(ShapeFn::circle(100), k05);
  SamplingOptions opt;
  opt.max_fov = 100.0;
  CHECK_NOTHROW(sample_projections(set, 0.01, ProjectionKind::Full, opt));
  CHECK_THROWS_AS(sample_projections(set, 0.0125, ProjectionKind::Full, opt), SpacingTooCoarse);
  opt.allow_coarse = true;
  CHECK_NOTHROW(sample_projections(set, 0.0125, ProjectionKind::Full, opt));
  CHECK_THROWS_AS(sample_projections(set, 0.0, ProjectionKind::Full), SpecError);
}

TEST_CASE("radial dcf against the ring-area oracle", "[sampling]")
{
  // Rings [0, 1/2], [1/2, 3/2], [3/2, 5/2] in units of the spacing.
  double const ring0 = pi * 0.25;
  double const ring1 = pi * (1.5 * 1.5 - 0.5 * 0.5);
  double const ring2 = pi * (2.5 * 2.5 - 1.5 * 1.5);
  auto const w = radial_dcf(2, ProjectionKind::Half, 2);
  REQUIRE(w.size() == 3);
  CHECK_THAT(w[0] / w[1], WithinRel(1.0 / 8.0, 1e-15));
  CHECK_THAT(w[2] / w[1], WithinRel(ring2 / ring1, 1e-15));
  CHECK_THAT(w[0] / w[1], WithinRel(ring0 / ring1, 1e-15));

  // Full projections carry both half-spokes at the origin.
  auto const f = radial_dcf(2, ProjectionKind::Full, 2);
  REQUIRE(f.size() == 5);
  CHECK_THAT(f[2] / f[3], WithinRel(2.0 / 8.0, 1e-15));
  CHECK(f[0] == f[4]);
  CHECK(f[1] == f[3]);

  auto const w3 = radial_dcf(3, ProjectionKind::Half, 10);
  for (std::size_t j = 1; j < w3.size(); ++j) {
    CHECK_THAT(w3[j] / w3[1], WithinRel(static_cast<double>(j * j), 1e-14));
  }
  // Ball of radius 1/2 over the unit-shell weight 4 pi: (pi/6) / (4 pi).
  CHECK_THAT(w3[0] / w3[1], WithinRel(1.0 / 24.0, 1e-15));

  CHECK(radial_dcf(2, ProjectionKind::Full, 0) == std::vector<double>{1.0});
  CHECK(radial_dcf(3, ProjectionKind::Half, 0) == std::vector<double>{1.0});
  CHECK_THROWS_AS(radial_dcf(4, ProjectionKind::Half, 3), SpecError);
}

TEST_CASE("angular dcf in 2D", "[sampling]")
{
  SECTION("isotropic circle is constant")
  {
    auto const set = design_2d(ShapeFn::circle(120), k05);
    for (double w : angular_dcf_2d(set, ShapeFn::circle(120))) { CHECK_THAT(w, WithinRel(0.5 / 120.0, 1e-15)); }
  }
  SECTION("direct substitution")
  {
    auto const fov = ShapeFn::ellipse(250, 75);
    auto const set = design_2d(fov, k05);
    REQUIRE(set.angles.front() == 0.0);
    CHECK_THAT(angular_dcf_2d(set, fov).front(), WithinRel(0.5 / 75.0, 1e-12));
    CHECK_THAT(angular_dcf_2d(set, fov).front(), WithinAbs(6.667e-3, 1e-6));
  }
  SECTION("dual designs have uniform weights")
  {
    for (auto const &fov : {ShapeFn::ellipse(120, 60), ShapeFn::rectangle(120, 85.7), ShapeFn::diamond(120, 120),
                            ShapeFn::stadium(120, 60)}) {
      auto const set = design_2d(fov, dual_shape(fov));
      auto const w = angular_dcf_2d(set, fov);
      for (double v : w) { CHECK_THAT(v, WithinRel(w.front(), 1e-9)); }
    }
  }
}

TEST_CASE("angular dcf in 3D", "[sampling]")
{
  auto const sphere = ShapeFn::circle(30);
  SECTION("isotropic sphere weights are equal")
  {
    for (auto const &t : {design_pr3d_cones(sphere, k05, sphere, ProjectionKind::Full, 2),
                          design_pr3d_spiral(sphere, k05, sphere, ProjectionKind::Half)}) {
      auto const w = angular_dcf_3d(t, sphere, sphere);
      for (double v : w) { CHECK_THAT(v, WithinRel(w.front(), 1e-12)); }
    }
  }
  SECTION("full spiral end ramp")
  {
    auto const t = design_pr3d_spiral(sphere, k05, sphere, ProjectionKind::Full);
    auto const ramp = spiral_end_ramp(t);
    CHECK_THAT(ramp.back(), WithinAbs(0.5, 1e-12));
    auto const w = angular_dcf_3d(t, sphere, sphere);
    CHECK_THAT(w.back() / w.front(), WithinAbs(0.5, 1e-12));

    // Midpoint in theta of the penultimate half-turn gets 0.75.
    double const end = t.projections.back().phi_total;
    double const th_lo = spiral_theta_at(t, end - 2.0 * pi);
    double const th_hi = spiral_theta_at(t, end - pi);
    double const mid = 0.5 * (th_lo + th_hi);
    std::size_t best = 0;
    for (std::size_t m = 0; m < t.size(); ++m) {
      double const phi = t.projections[m].phi_total;
      if (phi > end - 2.0 * pi && phi <= end - pi &&
          std::abs(t.projections[m].theta - mid) < std::abs(t.projections[best].theta - mid)) {
        best = m;
      }
    }
    double const slope = 0.5 / (th_hi - th_lo);
    CHECK_THAT(ramp[best], WithinAbs(0.75, slope * std::abs(t.projections[best].theta - mid) + 1e-12));
    CHECK_THAT(ramp[best], WithinAbs(0.75, 0.02));

    // Outside the last two half-turns nothing changes.
    for (std::size_t m = 0; m < t.size(); ++m) {
      if (t.projections[m].phi_total <= end - 2.0 * pi) { CHECK(ramp[m] == 1.0); }
    }
  }
  SECTION("half spirals and cones carry no ramp")
  {
    auto const h = design_pr3d_spiral(sphere, k05, sphere, ProjectionKind::Half);
    for (double v : spiral_end_ramp(h)) { CHECK(v == 1.0); }
  }
}

TEST_CASE("dcf is the product of its radial and angular parts", "[sampling]")
{
  auto const fov = ShapeFn::rectangle(120, 60);
  auto const set = design_2d(fov, k05);
  auto s = sample_projections(set, max_radial_spacing(fov), ProjectionKind::Full);
  auto const ang = angular_dcf_2d(set, fov);
  apply_dcf(s, ang);
  std::size_t const per = s.per_projection();
  for (std::size_t i = 0; i < s.size(); ++i) { CHECK(s.dcf[i] == s.radial[i % per] * ang[s.projection[i]]); }
  CHECK_THROWS_AS(apply_dcf(s, std::vector<double>(3, 1.0)), SpecError);
}

TEST_CASE("weights of a fully sampled isotropic design sum to the disk area", "[sampling]")
{
  for (double F : {100.0, 250.0}) {
    auto const fov = ShapeFn::circle(F);
    auto const set = design_2d(fov, k05);
    auto s = sample_projections(set, max_radial_spacing(fov), ProjectionKind::Full);
    apply_dcf(s, angular_dcf_2d(set, fov));
    double sum = 0.0;
    for (double w : s.dcf) { sum += w; }
    CHECK_THAT(sum, WithinRel(pi * 0.25, 0.02));
  }
}

TEST_CASE("PSF peak is real and at the origin", "[sampling]")
{
  auto const fov = ShapeFn::ellipse(80, 40);
  auto const set = design_2d(fov, k05);
  auto s = sample_projections(set, max_radial_spacing(fov), ProjectionKind::Full);
  apply_dcf(s, angular_dcf_2d(set, fov));
  auto const psf = compute_psf(s, make_dims(2, 96));
  auto const peak = psf.origin();
  CHECK(std::abs(peak.imag()) <= 1e-6 * std::abs(peak.real()));
  for (auto const &v : psf.values) { CHECK(std::abs(v) <= std::abs(peak) * (1.0 + 1e-12)); }
}
