// radfov: command-line front end for trajectory design, PSFs, metrics,
// efficiency curves and phantom runs. Exit codes: 0 ok, 2 bad input, 3 design
// or analysis failure; errors go to stderr as one JSON object.

#include <radfov/analysis.hpp>
#include <radfov/io.hpp>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace radfov;
using io::Json;

constexpr char const *tool_version = "radfov 0.1.0";

struct Options
{
  std::string mode;
  std::string fov, fovt, fovp, kmax;
  double res = 1.0;
  bool full = false;
  bool half = false;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::size_t dims = 0;
  std::string method = "spiral";
  double dkr = 0.0;
  bool allow_coarse = false;

  std::string traj, psf, ref, manifest;
  bool complex = false;
  double threshold = RidgeOptions{}.threshold;
  int directions = 36;

  std::string family, sizes;
  double aspect = 1.0;

  std::string phantom, centre;
  double density = 0.0;
  double amplitude = 1.0;
};

// What a command produced: files (name relative to --out), a stdout summary,
// and the canonical input recorded in the manifest.
struct Result
{
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
  Json input = Json::object();
};

std::string sha256_hex(std::string_view bytes)
{
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string dump(Json const &j) { return j.dump(2) + "\n"; }

ProjectionKind kind_of(Options const &o, ProjectionKind fallback = ProjectionKind::Full)
{
  if (o.full && o.half) { throw SpecError("--full and --half are exclusive"); }
  return o.half ? ProjectionKind::Half : o.full ? ProjectionKind::Full : fallback;
}

ShapeFn require_fov(std::string const &spec, char const *flag, double res)
{
  if (spec.empty()) { throw SpecError(std::string(flag) + " is required"); }
  return io::parse_fov(spec, res);
}

double radial_spacing(Options const &o, double max_fov)
{
  double const bound = 1.0 / max_fov;
  if (o.dkr <= 0.0) { return bound; }
  if (!o.allow_coarse && o.dkr > bound * (1.0 + 1e-12)) {
    throw SpacingTooCoarse("--dkr " + io::format_number(o.dkr) + " exceeds 1/max(FOV) = " + io::format_number(bound) +
                           " (pass --allow-coarse to override)");
  }
  return o.dkr;
}

// Polar shapes are drawn in the (rho, z) plane: wx transverse, wy along z.
struct Polar
{
  ShapeFn fov_theta;
  ShapeFn kmax_theta;
  ShapeFn fov_phi;
};

Polar polar_shapes(Options const &o)
{
  ShapeFn const drawn = require_fov(o.fovt, "--fovt", o.res);
  ShapeFn const k = io::parse_kmax(o.kmax, drawn);
  ShapeFn const ft = polar_view(drawn);
  ShapeFn const fp = o.fovp.empty() ? ShapeFn::circle(ft(0.5 * pi)) : io::parse_fov(o.fovp, o.res);
  return {ft, polar_view(k), fp};
}

// ---------------------------------------------------------------- design

Result cmd_design(Options const &o)
{
  Result r;
  Json traj;
  if (o.mode == "pr2d") {
    ShapeFn const fov = require_fov(o.fov, "--fov", o.res);
    ShapeFn const k = io::parse_kmax(o.kmax, fov);
    auto const kind = kind_of(o);
    Design2DOptions opt;
    opt.width = kind == ProjectionKind::Full ? pi : 2.0 * pi;
    auto const set = design_2d(fov, k, opt);
    traj = io::trajectory_json(set, fov, k, kind, radial_spacing(o, fov.max_value()), o.res);
  } else if (o.mode == "cones3d") {
    ShapeFn const drawn = require_fov(o.fovt, "--fovt", o.res);
    ShapeFn const ft = polar_view(drawn);
    ShapeFn const kt = polar_view(io::parse_kmax(o.kmax, drawn));
    traj = io::cones_json(design_cones(ft, kt), ft, kt, o.res);
  } else if (o.mode == "pr3d-cones" || o.mode == "pr3d-spiral") {
    auto const p = polar_shapes(o);
    auto const kind = kind_of(o);
    auto const t = o.mode == "pr3d-cones" ? design_pr3d_cones(p.fov_theta, p.kmax_theta, p.fov_phi, kind, o.seed)
                                          : design_pr3d_spiral(p.fov_theta, p.kmax_theta, p.fov_phi, kind, o.seed);
    double const dkr = radial_spacing(o, std::max(p.fov_theta.max_value(), p.fov_phi.max_value()));
    traj = io::trajectory_json(t, p.fov_theta, p.kmax_theta, p.fov_phi, dkr, o.res);
  } else {
    throw SpecError("unknown design mode '" + o.mode + "'");
  }
  r.files.emplace_back("trajectory.json", dump(traj));
  r.summary = "N=" + std::to_string(traj.at("N").get<std::size_t>()) + "\n";
  r.input = {{"mode", o.mode}, {"kind", traj.at("kind")}, {"seed", traj.at("seed")}, {"shapes", traj.at("shapes")}};
  if (traj.contains("dkr")) { r.input["dkr"] = traj.at("dkr"); }
  return r;
}

// ---------------------------------------------------------------- psf

Json trajectory_source(Json traj)
{
  traj.erase("projections");
  traj.erase("per_cone");
  return traj;
}

Result cmd_psf(Options const &o)
{
  if (o.traj.empty()) { throw SpecError("--traj is required"); }
  Json const traj = io::read_json(o.traj);
  auto const samples = io::samples_from_trajectory(traj);
  std::size_t const n = o.dims ? o.dims : default_psf_size(io::trajectory_max_fov(traj));
  auto const psf = compute_psf(samples, make_dims(samples.ndim, n));
  bool const complex = o.complex || samples.kind == ProjectionKind::Half;

  Json side = io::grid_sidecar(psf, complex);
  side["quantity"] = "psf";
  side["source"] = trajectory_source(traj);
  Result r;
  r.files.emplace_back("psf.bin", io::grid_bytes(psf, complex));
  r.files.emplace_back("psf.bin.json", dump(side));
  r.summary = "dims=" + side.at("dims").dump() + " peak=" + io::format_number(std::abs(psf.origin())) + "\n";
  r.input = {{"trajectory_sha256", sha256_hex(io::read_file(o.traj))}, {"dims", n}, {"complex", complex}};
  return r;
}

// ---------------------------------------------------------------- metrics

GridVolume load_grid(std::string const &path)
{
  auto const header = io::header_from_sidecar(io::read_json(path + ".json"));
  return io::grid_from_bytes(io::read_file(path), header);
}

// Dense-angle reference PSF for the design recorded in a sidecar.
GridVolume rebuild_reference(Json const &source, GridVolume const &psf)
{
  auto const &sh = source.at("shapes");
  auto const kind = io::kind_from_string(source.at("kind").get<std::string>());
  double const dkr = source.at("dkr").get<double>();
  if (psf.ndim == 2) {
    if (psf.dims[0] != psf.dims[1]) { throw SpecError("reference rebuild needs a square frame"); }
    return design_psf_2d(
        io::shape_from_json(sh.at("fov")), io::shape_from_json(sh.at("kmax")), kind, 4.0, dkr, psf.dims[0]);
  }
  Pr3DCase c{io::shape_from_json(sh.at("fovt")),
             io::shape_from_json(sh.at("kmax")),
             io::shape_from_json(sh.at("fovp")),
             io::method_from_string(source.at("mode").get<std::string>()),
             kind,
             source.value("seed", std::uint64_t{0})};
  return compute_psf(sample_pr3d(c, 3.0, dkr), psf.dims);
}

Json optional_number(std::optional<double> v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> ridge_or_null(RidgeFinder const &f, Vec3 const &dir)
{
  try {
    return f(dir);
  } catch (RidgeNotFound const &) {
    return std::nullopt;
  }
}

Result cmd_metrics(Options const &o)
{
  if (o.psf.empty()) { throw SpecError("--psf is required"); }
  Json const side = io::read_json(o.psf + ".json");
  auto const psf = load_grid(o.psf);
  Json const source = side.value("source", Json::object());

  GridVolume reference;
  std::string ref_origin = "file";
  if (!o.ref.empty()) {
    reference = load_grid(o.ref);
  } else {
    if (source.empty()) { throw SpecError("no --ref given and the PSF sidecar records no trajectory to rebuild it"); }
    reference = rebuild_reference(source, psf);
    ref_origin = "rebuilt";
  }

  RidgeOptions ropt;
  ropt.threshold = o.threshold;
  RidgeFinder const finder(psf, reference, ropt);

  Json m;
  m["ndim"] = psf.ndim;
  m["dims"] = side.at("dims");
  m["peak"] = std::abs(psf.origin());
  m["threshold"] = o.threshold;
  m["reference"] = ref_origin;

  if (psf.ndim == 2) {
    ShapeFn const fov = !o.fov.empty() ? io::parse_fov(o.fov, o.res)
                        : source.contains("shapes") ? io::shape_from_json(source.at("shapes").at("fov"))
                                                    : throw SpecError("--fov is required when the sidecar has no shapes");
    double kpeak = nominal_kmax;
    if (!o.kmax.empty()) {
      kpeak = io::parse_kmax(o.kmax, fov).max_value();
    } else if (source.contains("shapes")) {
      kpeak = io::shape_from_json(source.at("shapes").at("kmax")).max_value();
    }
    double const lobe = 2.0 * resolution_for(kpeak);
    m["fwhm"] = {{"x", measure_fwhm(psf, {1, 0, 0})}, {"y", measure_fwhm(psf, {0, 1, 0})}};
    Json ridges = Json::array();
    for (double psi : probe_directions(o.directions)) {
      ridges.push_back(
          {{"psi", psi}, {"radius", optional_number(ridge_or_null(finder, direction_2d(psi)))}, {"fov", fov(psi)}});
    }
    m["ridges"] = std::move(ridges);
    m["lowlevel_power_fraction"] = lowlevel_alias_power(psf, reference, fov, lobe);
    m["peak_inband_alias"] = inband_alias_peak(psf, reference, fov, lobe);
    m["fov"] = io::shape_to_json(fov);
  } else {
    auto const &sh = source.at("shapes");
    ShapeFn const ft = io::shape_from_json(sh.at("fovt"));
    ShapeFn const fp = io::shape_from_json(sh.at("fovp"));
    m["fwhm"] = {{"x", measure_fwhm(psf, {1, 0, 0})}, {"y", measure_fwhm(psf, {0, 1, 0})}, {"z", measure_fwhm(psf, {0, 0, 1})}};
    Json ridges = Json::array();
    auto add = [&](char const *axis, Vec3 const &dir, double expected) {
      ridges.push_back({{"axis", axis}, {"radius", optional_number(ridge_or_null(finder, dir))}, {"fov", expected}});
    };
    add("x", {1, 0, 0}, std::min(ft(0.5 * pi), fp(0.0)));
    add("y", {0, 1, 0}, std::min(ft(0.5 * pi), fp(0.5 * pi)));
    add("z", {0, 0, 1}, ft(0.0));
    m["ridges"] = std::move(ridges);
    m["lowlevel_power_fraction"] = nullptr;
    m["peak_inband_alias"] = nullptr;
  }

  Result r;
  r.files.emplace_back("metrics.json", dump(m));
  r.summary = dump(m);
  r.input = {{"psf_sha256", sha256_hex(io::read_file(o.psf))}, {"reference", ref_origin}, {"threshold", o.threshold}};
  return r;
}

// ---------------------------------------------------------------- curve

std::vector<double> parse_sizes(std::string const &spec)
{
  auto const dots = spec.find("..");
  if (dots == std::string::npos) { return io::parse_list(spec); }
  auto const colon = spec.find(':', dots);
  double const lo = io::parse_number(std::string_view(spec).substr(0, dots));
  double const hi = io::parse_number(std::string_view(spec).substr(dots + 2, colon - dots - 2));
  int const count = colon == std::string::npos ? 11 : static_cast<int>(io::parse_number(std::string_view(spec).substr(colon + 1)));
  if (!(lo > 0.0) || !(hi >= lo) || count < 2) { throw SpecError("--sizes range must be lo..hi[:count] with 0 < lo <= hi, count >= 2"); }
  std::vector<double> out;
  for (int i = 0; i < count; ++i) { out.push_back(lo + (hi - lo) * i / (count - 1)); }
  return out;
}

Result cmd_curve(Options const &o)
{
  if (o.family.empty() || o.sizes.empty()) { throw SpecError("--family and --sizes are required"); }
  if (!(o.aspect >= 1.0)) { throw SpecError("--aspect must be >= 1"); }
  auto sizes = parse_sizes(o.sizes);
  for (double &s : sizes) { s /= o.res; }
  double const a = o.aspect;
  std::string const f = o.family;
  bool const iso = f == "circle" || f == "sphere";
  std::string const name = iso || a == 1.0 ? f : f + "-" + io::format_number(a);

  std::vector<EfficiencyPoint> pts;
  if (f == "circle" || f == "ellipse" || f == "rect" || f == "diamond" || f == "oval") {
    auto family = [&](double s) {
      if (f == "circle") { return ShapeFn::circle(s); }
      return io::detail::shape_from_params(f, {s, s / a}, 1.0);
    };
    for (double s : sizes) {
      ShapeFn const fov = family(s);
      auto const k = io::parse_kmax(o.kmax, fov);
      auto const pt = efficiency_curve_2d(name, family, {s}, k);
      pts.insert(pts.end(), pt.begin(), pt.end());
    }
  } else if (f == "sphere" || f == "cylinder" || f == "ellipsoid") {
    auto const method = io::method_from_string(o.method);
    auto const kind = kind_of(o);
    auto family = [&](double s) {
      ShapeFn const drawn = f == "sphere"     ? ShapeFn::circle(s)
                            : f == "cylinder" ? ShapeFn::rectangle(s, s / a)
                                              : ShapeFn::ellipse(s, s / a);
      return Pr3DCase{polar_view(drawn), polar_view(io::parse_kmax(o.kmax, drawn)), ShapeFn::circle(s), method, kind, o.seed};
    };
    pts = efficiency_curve_3d(name, family, sizes);
  } else {
    throw SpecError("unknown family '" + f + "'");
  }

  Result r;
  std::string const csv = io::curve_csv(pts);
  r.files.emplace_back("curve.csv", csv);
  r.summary = csv;
  r.input = {{"family", f}, {"aspect", a}, {"sizes", sizes}, {"kmax", o.kmax.empty() ? "0.5" : o.kmax}};
  return r;
}

// ---------------------------------------------------------------- phantom

EllipsoidPhantom parse_phantom(Options const &o, int ndim)
{
  if (o.phantom.empty()) { throw SpecError("--phantom is required"); }
  auto const colon = o.phantom.find(':');
  std::string const kind = o.phantom.substr(0, colon);
  if (colon == std::string::npos || (kind != "ellipse" && kind != "ellipsoid")) {
    throw SpecError("--phantom must be ellipse:WX,WY or ellipsoid:WX,WY,WZ");
  }
  auto const w = io::parse_list(std::string_view(o.phantom).substr(colon + 1));
  if (w.size() != static_cast<std::size_t>(ndim)) {
    throw SpecError("--phantom needs " + std::to_string(ndim) + " widths for this design");
  }
  EllipsoidPhantom ph;
  ph.amplitude = o.amplitude;
  for (int d = 0; d < ndim; ++d) {
    if (!(w[static_cast<std::size_t>(d)] > 0.0)) { throw SpecError("phantom widths must be positive"); }
    ph.semi_axes[static_cast<std::size_t>(d)] = 0.5 * w[static_cast<std::size_t>(d)] / o.res;
  }
  if (!o.centre.empty()) {
    auto const c = io::parse_list(o.centre);
    if (c.size() != static_cast<std::size_t>(ndim)) { throw SpecError("--centre needs one coordinate per axis"); }
    for (int d = 0; d < ndim; ++d) { ph.centre[static_cast<std::size_t>(d)] = c[static_cast<std::size_t>(d)]; }
  }
  return ph;
}

std::size_t phantom_frame(double max_fov)
{
  auto n = static_cast<std::size_t>(std::ceil(1.25 * max_fov));
  return n + (n % 2);
}

Result cmd_phantom(Options const &o)
{
  SampledKSpace samples;
  SampledKSpace reference;
  std::size_t count = 0;
  double max_fov = 0.0;
  double density = o.density;
  int ndim = 2;
  Json shapes;

  if (!o.fov.empty()) {
    ShapeFn const fov = io::parse_fov(o.fov, o.res);
    ShapeFn const k = io::parse_kmax(o.kmax, fov);
    auto const kind = kind_of(o);
    if (density <= 0.0) { density = 4.0; }
    max_fov = fov.max_value();
    double const dkr = radial_spacing(o, max_fov);
    Design2DOptions opt;
    opt.width = kind == ProjectionKind::Full ? pi : 2.0 * pi;
    auto build = [&](double dens) {
      ShapeFn const designed = fov.scaled(dens);
      auto const set = design_2d(designed, k, opt);
      auto s = sample_projections(set, dkr, kind);
      apply_dcf(s, angular_dcf_2d(set, designed));
      return s;
    };
    samples = build(1.0);
    reference = build(density);
    count = samples.projections;
    shapes = {{"fov", io::shape_to_json(fov)}, {"kmax", io::shape_to_json(k)}};
  } else {
    auto const p = polar_shapes(o);
    ndim = 3;
    if (density <= 0.0) { density = 3.0; }
    Pr3DCase const c{p.fov_theta, p.kmax_theta, p.fov_phi, io::method_from_string(o.method), kind_of(o), o.seed};
    max_fov = c.max_fov();
    double const dkr = radial_spacing(o, max_fov);
    samples = sample_pr3d(c, 1.0, dkr);
    reference = sample_pr3d(c, density, dkr);
    count = samples.projections;
    shapes = {{"fovt", io::shape_to_json(p.fov_theta)}, {"kmax", io::shape_to_json(p.kmax_theta)}, {"fovp", io::shape_to_json(p.fov_phi)}};
  }

  auto const ph = parse_phantom(o, ndim);
  std::size_t const n = o.dims ? o.dims : phantom_frame(max_fov);
  auto const res = phantom_experiment(samples, reference, ph, make_dims(ndim, n));

  Json rep;
  rep["peak_inband_alias"] = res.peak_inband_alias;
  rep["alias_free"] = res.alias_free;
  rep["voxels"] = res.voxels;
  rep["N"] = count;
  rep["reference_density"] = density;
  rep["dims"] = std::vector<std::size_t>(static_cast<std::size_t>(ndim), n);
  rep["phantom"] = {{"amplitude", ph.amplitude},
                    {"centre", std::vector<double>(ph.centre.begin(), ph.centre.begin() + ndim)},
                    {"semi_axes", std::vector<double>(ph.semi_axes.begin(), ph.semi_axes.begin() + ndim)}};
  rep["shapes"] = shapes;
  if (ndim == 3) { rep["method"] = o.method; }

  Result r;
  r.files.emplace_back("phantom.json", dump(rep));
  r.summary = dump(rep);
  r.input = {{"shapes", shapes}, {"phantom", rep.at("phantom")}, {"seed", o.seed}, {"dims", n}};
  return r;
}

// ---------------------------------------------------------------- driver

struct Failure
{
  int exit_code;
  std::string code;
  std::string message;
};

int report(Failure const &f)
{
  Json j{{"error", f.code}, {"message", f.message}, {"exit", f.exit_code}};
  std::cerr << j.dump() << "\n";
  return f.exit_code;
}

// Arguments minus --out and its value: the part a manifest replays.
std::vector<std::string> replayable(std::vector<std::string> const &args)
{
  std::vector<std::string> keep;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].starts_with("--out=")) { continue; }
    keep.push_back(args[i]);
  }
  return keep;
}

int run(std::vector<std::string> args, bool quiet = false);

Result cmd_replay(Options const &o)
{
  if (o.manifest.empty()) { throw SpecError("--manifest is required"); }
  Json const m = io::read_json(o.manifest);
  auto argv = m.at("argv").get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "replay") { throw SpecError("a replay manifest cannot be replayed"); }
  argv.push_back("--out");
  argv.push_back(o.out);
  if (int const rc = run(argv, true); rc != 0) { throw Error("ReplayFailed", "replayed command exited with " + std::to_string(rc)); }
  Json mismatches = Json::array();
  for (auto const &[name, digest] : m.at("outputs").items()) {
    auto const path = (std::filesystem::path(o.out) / name).string();
    if (sha256_hex(io::read_file(path)) != digest.get<std::string>()) { mismatches.push_back(name); }
  }
  if (!mismatches.empty()) { throw Error("ManifestMismatch", "outputs differ from the manifest: " + mismatches.dump()); }
  Result r;
  r.summary = "reproduced " + std::to_string(m.at("outputs").size()) + " output(s)\n";
  return r;
}

void write_outputs(std::string const &command, std::vector<std::string> const &args, Options const &o, Result const &r)
{
  std::filesystem::create_directories(o.out);
  Json digests = Json::object();
  for (auto const &[name, bytes] : r.files) {
    io::write_file((std::filesystem::path(o.out) / name).string(), bytes);
    digests[name] = sha256_hex(bytes);
  }
  if (command == "replay") { return; }
  Json manifest{{"command", command},
                {"argv", replayable(args)},
                {"input", r.input},
                {"seed", o.seed},
                {"tool_version", tool_version},
                {"outputs", digests}};
  io::write_file((std::filesystem::path(o.out) / (command + ".manifest.json")).string(), dump(manifest));
}

int run(std::vector<std::string> args, bool quiet)
{
  Options o;
  CLI::App app{"Anisotropic field-of-view radial trajectory design and verification", "radfov"};
  app.set_version_flag("--version", tool_version);
  app.require_subcommand(1);

  auto shape_flags = [&](CLI::App *sub) {
    sub->add_option("--fov", o.fov, "2D FOV: kind:params in mm (see --res) or JSON");
    sub->add_option("--fovt", o.fovt, "polar FOV drawn in the (rho, z) plane: kind:WRHO,WZ");
    sub->add_option("--fovp", o.fovp, "azimuthal FOV in the x-y plane (default: circle of the transverse polar width)");
    sub->add_option("--kmax", o.kmax, "k-space extent in cycles/px: number, kind:params, dual or dual:PEAK");
    sub->add_option("--res", o.res, "mm per px; shape lengths are divided by it")->check(CLI::PositiveNumber);
    sub->add_flag("--full", o.full, "full projections through the origin (default)");
    sub->add_flag("--half", o.half, "half projections from the origin");
    sub->add_option("--seed", o.seed, "seed for randomized cone offsets");
    sub->add_option("--dkr", o.dkr, "radial spacing in cycles/px (default 1/max FOV)");
    sub->add_flag("--allow-coarse", o.allow_coarse, "accept --dkr above 1/max FOV");
  };
  auto out_flag = [&](CLI::App *sub) { sub->add_option("--out", o.out, "output directory"); };

  auto *design = app.add_subcommand("design", "design a trajectory and write trajectory.json");
  design->add_option("mode", o.mode, "pr2d | cones3d | pr3d-cones | pr3d-spiral")
      ->required()
      ->check(CLI::IsMember({"pr2d", "cones3d", "pr3d-cones", "pr3d-spiral"}));
  shape_flags(design);
  out_flag(design);

  auto *psf = app.add_subcommand("psf", "grid unit data on a trajectory and write psf.bin with a JSON sidecar");
  psf->add_option("--traj", o.traj, "trajectory JSON")->required();
  psf->add_option("--dims", o.dims, "frame size per axis (default: even ceil of 2.4 max FOV)");
  psf->add_flag("--complex", o.complex, "write interleaved complex values");
  out_flag(psf);

  auto *metrics = app.add_subcommand("metrics", "ridge radii, FWHM and aliasing power of a PSF");
  metrics->add_option("--psf", o.psf, "PSF binary (sidecar at <file>.json)")->required();
  metrics->add_option("--ref", o.ref, "dense-angle reference PSF; rebuilt from the sidecar when absent");
  metrics->add_option("--fov", o.fov, "FOV for the in-band region (default: from the sidecar)");
  metrics->add_option("--kmax", o.kmax, "kmax for the main-lobe radius (default: from the sidecar)");
  metrics->add_option("--res", o.res, "mm per px")->check(CLI::PositiveNumber);
  metrics->add_option("--threshold", o.threshold, "ridge threshold as a fraction of the PSF peak");
  metrics->add_option("--directions", o.directions, "probe directions over a full turn (2D)")->check(CLI::PositiveNumber);
  out_flag(metrics);

  auto *curve = app.add_subcommand("curve", "projection count against FOV area or volume, as CSV");
  curve->add_option("--family", o.family, "circle | ellipse | rect | diamond | oval | sphere | cylinder | ellipsoid")->required();
  curve->add_option("--aspect", o.aspect, "long/short axis ratio");
  curve->add_option("--sizes", o.sizes, "lo..hi[:count] or a comma list of long-axis widths")->required();
  curve->add_option("--kmax", o.kmax, "k-space extent (2D shapes in the plane, 3D in (rho, z))");
  curve->add_option("--res", o.res, "mm per px")->check(CLI::PositiveNumber);
  curve->add_option("--method", o.method, "3D method: cones | spiral")->check(CLI::IsMember({"cones", "spiral"}));
  curve->add_flag("--full", o.full);
  curve->add_flag("--half", o.half);
  curve->add_option("--seed", o.seed);
  out_flag(curve);

  auto *phantom = app.add_subcommand("phantom", "in-band aliasing of an analytic ellipse or ellipsoid");
  shape_flags(phantom);
  phantom->add_option("--method", o.method, "3D method: cones | spiral")->check(CLI::IsMember({"cones", "spiral"}));
  phantom->add_option("--phantom", o.phantom, "ellipse:WX,WY or ellipsoid:WX,WY,WZ, full widths in mm")->required();
  phantom->add_option("--centre", o.centre, "phantom centre in px, comma separated");
  phantom->add_option("--amplitude", o.amplitude);
  phantom->add_option("--density", o.density, "angular density of the reference design (default 4 in 2D, 3 in 3D)");
  phantom->add_option("--dims", o.dims, "frame size per axis (default: even ceil of 1.25 max FOV)");
  out_flag(phantom);

  auto *replay = app.add_subcommand("replay", "re-run a manifest and check the output digests");
  replay->add_option("--manifest", o.manifest)->required();
  out_flag(replay);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (CLI::CallForHelp const &e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const &e) {
    return app.exit(e);
  } catch (CLI::CallForVersion const &e) {
    return app.exit(e);
  } catch (CLI::ParseError const &e) {
    return report({2, "UsageError", e.what()});
  }

  std::string const command = app.get_subcommands().front()->get_name();
  try {
    Result const r = command == "design"    ? cmd_design(o)
                     : command == "psf"     ? cmd_psf(o)
                     : command == "metrics" ? cmd_metrics(o)
                     : command == "curve"   ? cmd_curve(o)
                     : command == "phantom" ? cmd_phantom(o)
                                            : cmd_replay(o);
    write_outputs(command, args, o, r);
    if (!quiet) { std::cout << r.summary; }
    return 0;
  } catch (SpecError const &e) {
    return report({2, e.code(), e.what()});
  } catch (Error const &e) {
    return report({3, e.code(), e.what()});
  } catch (std::filesystem::filesystem_error const &e) {
    return report({2, "IOError", e.what()});
  } catch (std::exception const &e) {
    return report({3, "InternalError", e.what()});
  }
}

} // namespace

int main(int argc, char **argv) { return run(std::vector<std::string>(argv + 1, argv + argc)); }
