#include <radfov/io.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace radfov;
using Catch::Matchers::WithinRel;

namespace {

void same_shape(ShapeFn const &a, ShapeFn const &b)
{
  for (int i = 0; i < 97; ++i) {
    double const phi = 2.0 * pi * i / 97.0;
    CHECK(a(phi) == b(phi));
  }
}

} // namespace

TEST_CASE("numbers round-trip through their shortest text", "[io]")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    double const v = u(rng) * std::pow(10.0, i % 13 - 6);
    CHECK(io::parse_number(io::format_number(v)) == v);
  }
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(250.0) == "250");
  CHECK(io::parse_list("1,2.5,-3") == std::vector<double>{1.0, 2.5, -3.0});
  CHECK_THROWS_AS(io::parse_number("12x"), SpecError);
  CHECK_THROWS_AS(io::parse_number(""), SpecError);
  CHECK_THROWS_AS(io::parse_number("nan"), SpecError);
  CHECK_THROWS_AS(io::parse_list("1,,2"), SpecError);
}

TEST_CASE("shape specs", "[io]")
{
  same_shape(io::parse_fov("circle:250"), ShapeFn::circle(250));
  same_shape(io::parse_fov("ellipse:250,75"), ShapeFn::ellipse(250, 75));
  same_shape(io::parse_fov("rect:240,65"), ShapeFn::rectangle(240, 65));
  same_shape(io::parse_fov("oval:120,60"), ShapeFn::stadium(120, 60));
  same_shape(io::parse_fov("diamond:120,80"), ShapeFn::diamond(120, 80));
  same_shape(io::parse_fov("star:60,120,6"), ShapeFn::star(60, 120, 6));

  // mm with 0.5 mm/px resolution
  same_shape(io::parse_fov("ellipse:125,37.5", 0.5), ShapeFn::ellipse(250, 75));
  same_shape(io::parse_fov(R"({"kind":"ellipse","wx":25,"wy":7.5,"unit":"cm","res":1})"), ShapeFn::ellipse(250, 75));
  same_shape(io::parse_fov(R"({"kind":"circle","d":100,"unit":"mm"})", 2.0), ShapeFn::circle(50));

  CHECK_THROWS_AS(io::parse_fov("ellipse:250"), SpecError);
  CHECK_THROWS_AS(io::parse_fov("hexagon:1,2"), SpecError);
  CHECK_THROWS_AS(io::parse_fov("circle250"), SpecError);
  CHECK_THROWS_AS(io::parse_fov("circle:-1"), SpecError);
  CHECK_THROWS_AS(io::parse_fov("star:60,120,2.5"), SpecError);
  CHECK_THROWS_AS(io::parse_fov("{\"kind\":"), SpecError);
  CHECK_THROWS_AS(io::parse_fov("circle:10", 0.0), SpecError);
}

TEST_CASE("kmax specs", "[io]")
{
  auto const fov = ShapeFn::ellipse(120, 60);
  same_shape(io::parse_kmax("", fov), ShapeFn::circle(0.5));
  same_shape(io::parse_kmax("0.4", fov), ShapeFn::circle(0.4));
  same_shape(io::parse_kmax("dual", fov), dual_shape(fov));
  same_shape(io::parse_kmax("dual:0.3", fov), dual_shape(fov, 0.3));
  same_shape(io::parse_kmax("ellipse:0.5,0.25", fov), ShapeFn::ellipse(0.5, 0.25));
  CHECK_THROWS_AS(io::parse_kmax("ellipse:0.8,0.25", fov), SpecError);
  CHECK_THROWS_AS(io::parse_kmax("0.7", fov), SpecError);
}

TEST_CASE("shape JSON round trip", "[io]")
{
  auto const fov = ShapeFn::rectangle(120, 85.7);
  for (auto const &s : {ShapeFn::circle(250), ShapeFn::ellipse(250, 75).rotated(0.3), ShapeFn::star(10, 20, 6),
                        ShapeFn::stadium(120, 60).scaled(4.0), dual_shape(fov), dual_shape(ShapeFn::ellipse(120, 60), 0.3),
                        ShapeFn::tabulated({100, 80, 60, 90}, 2.0 * pi)}) {
    auto const text = io::shape_to_json(s).dump();
    same_shape(io::shape_from_json(io::Json::parse(text)), s);
  }
  CHECK(io::shape_to_json(ShapeFn::ellipse(250, 75)).dump() == R"({"kind":"ellipse","wx":250.0,"wy":75.0})");
}

TEST_CASE("2D trajectory export re-samples bit-identically", "[io]")
{
  auto const fov = ShapeFn::ellipse(250, 75);
  auto const k = ShapeFn::circle(0.5);
  auto const set = design_2d(fov, k);
  double const dkr = max_radial_spacing(fov);
  auto const j = io::trajectory_json(set, fov, k, ProjectionKind::Full, dkr, 1.0);
  CHECK(j.begin().key() == "schema");
  CHECK(j.at("schema") == "radial-fov/1");
  CHECK(j.at("N") == 197);

  auto const back = io::Json::parse(j.dump());
  CHECK(back == j);
  auto const s = io::samples_from_trajectory(back);
  auto direct = sample_projections(set, dkr, ProjectionKind::Full);
  apply_dcf(direct, angular_dcf_2d(set, fov));
  REQUIRE(s.size() == direct.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.k[i] == direct.k[i]);
    CHECK(s.dcf[i] == direct.dcf[i]);
  }
  CHECK(io::trajectory_max_fov(back) == 250.0);

  auto bad = back;
  bad["schema"] = "radial-fov/0";
  CHECK_THROWS_AS(io::samples_from_trajectory(bad), SpecError);
  bad = back;
  bad.erase("dkr");
  CHECK_THROWS_AS(io::samples_from_trajectory(bad), SpecError);
}

TEST_CASE("3D trajectory export re-samples bit-identically", "[io]")
{
  auto const ft = polar_view(ShapeFn::rectangle(40, 20));
  auto const fp = ShapeFn::circle(40);
  auto const k = ShapeFn::circle(0.5);
  for (auto const &t : {design_pr3d_spiral(ft, k, fp, ProjectionKind::Full, 0),
                        design_pr3d_cones(ft, k, fp, ProjectionKind::Half, 5)}) {
    auto const back = io::Json::parse(io::trajectory_json(t, ft, k, fp, 1.0 / 40.0, 1.0).dump());
    CHECK(io::trajectory_ndim(back) == 3);
    auto const s = io::samples_from_trajectory(back);
    auto direct = sample_projections(t, 1.0 / 40.0);
    apply_dcf(direct, angular_dcf_3d(t, ft, fp));
    REQUIRE(s.size() == direct.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s.k[i] == direct.k[i]);
      CHECK(s.dcf[i] == direct.dcf[i]);
    }
  }
  auto const cones = io::cones_json(design_cones(ft, k), ft, k, 1.0);
  CHECK_THROWS_AS(io::trajectory_ndim(cones), SpecError);
}

TEST_CASE("grid binary layout", "[io]")
{
  GridVolume g(2, {3, 2, 1});
  g.values[0] = {1.0, -2.0};
  g.values[1] = {0.5, 0.0};
  g.values[5] = {-1.0, 3.0};
  auto const real = io::grid_bytes(g, false);
  auto const cplx = io::grid_bytes(g, true);
  CHECK(real.size() == 6 * 4);
  CHECK(cplx.size() == 6 * 8);
  // 1.0f little-endian
  CHECK(static_cast<unsigned char>(real[0]) == 0x00);
  CHECK(static_cast<unsigned char>(real[1]) == 0x00);
  CHECK(static_cast<unsigned char>(real[2]) == 0x80);
  CHECK(static_cast<unsigned char>(real[3]) == 0x3f);
  // -2.0f follows 1.0f in interleaved form
  CHECK(static_cast<unsigned char>(cplx[7]) == 0xc0);

  auto const side = io::grid_sidecar(g, true);
  CHECK(side.at("dims") == io::Json::array({3, 2}));
  CHECK(side.at("endianness") == "little");
  auto const h = io::header_from_sidecar(io::Json::parse(side.dump()));
  auto const back = io::grid_from_bytes(cplx, h);
  CHECK(back.values == g.values);
  CHECK_THROWS_AS(io::grid_from_bytes(real, h), SpecError);
  CHECK_THROWS_AS(io::header_from_sidecar(io::Json{{"dims", {4}}, {"complex", false}}), SpecError);
}

TEST_CASE("curve CSV", "[io]")
{
  std::vector<EfficiencyPoint> const pts{{"rect-2", 50.0, 1250.0, 99}, {"rect-2", 100.5, 5050.125, 180}};
  CHECK(io::curve_csv(pts) == "shape,size_param,area_or_volume,N\nrect-2,50,1250,99\nrect-2,100.5,5050.125,180\n");

  auto const curve = efficiency_curve_2d("rect-2", [](double s) { return ShapeFn::rectangle(s, s / 2); }, {50.0, 100.0},
                                         ShapeFn::circle(0.5));
  CHECK_THAT(curve[0].measure, WithinRel(1250.0, 1e-3));
  CHECK(curve[0].count < curve[1].count);
}
