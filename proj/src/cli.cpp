#include "cubefm/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cubefm/degeneracy.hpp"
#include "cubefm/estimators.hpp"
#include "cubefm/exact.hpp"
#include "cubefm/harness.hpp"
#include "cubefm/io.hpp"
#include "cubefm/quadrics.hpp"

namespace cubefm {

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

// Writes through `body` to the file at `path`, or to `out` when path is empty.
template <typename F>
void emit(const std::string& path, std::ostream& out, F&& body) {
  if (path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw DataError("cannot write '" + path + "'");
  body(file);
}

Eigen::Vector3d vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

struct EstimateArgs {
  std::string input;
  std::string algo = "cube8";
};

int run_estimate(const EstimateArgs& a, std::ostream& out) {
  auto in = open_input(a.input);
  const Correspondences c = read_correspondences(in);
  const Algo algo = parse_algo(a.algo);
  std::optional<FMatrix> F;
  switch (algo) {
    case Algo::EightPoint:
      F = eight_point(c.X, c.Y);
      break;
    case Algo::SevenPoint: {
      if (c.X.size() < 7) throw Error(Errc::InsufficientPoints, "7pt needs at least 7 points");
      const auto pencil = seven_point(std::span(c.X).first(7), std::span(c.Y).first(7));
      double best = std::numeric_limits<double>::infinity();
      for (const auto& cand : pencil.candidates) {
        const double r = epipolar_residual(cand, c.X, c.Y);
        if (r < best) {
          best = r;
          F = cand;
        }
      }
      break;
    }
    case Algo::Cube8:
      F = cube_eight_point(c.X, c.Y);
      break;
  }
  const Eigen::Matrix3d& m = F->matrix();
  out << "F\n";
  for (int r = 0; r < 3; ++r) {
    out << format_double(m(r, 0)) << ' ' << format_double(m(r, 1)) << ' '
        << format_double(m(r, 2)) << '\n';
  }
  out << "residual " << format_double(epipolar_residual(*F, c.X, c.Y)) << '\n';
  return 0;
}

int run_verify(const std::string& input, std::ostream& out) {
  auto in = open_input(input);
  const auto P = read_world_points(in);
  if (P.empty()) throw Error(Errc::InsufficientPoints, "no points");
  const int rank = numerical_rank(veronese_matrix(P));
  const int bound = std::min(rank, 8);
  out << "points " << P.size() << '\n';
  out << "veronese_rank " << rank << '\n';
  out << "z_rank_bound " << bound << '\n';
  out << "eight_point_degenerate " << (P.size() >= 8 && bound < 8 ? "yes" : "no") << '\n';
  if (P.size() == 8) {
    Octet oct;
    bool affine = true;
    for (int i = 0; i < 8; ++i) {
      oct[i] = P[i].coords();
      affine = affine && P[i].is_affine();
    }
    if (affine) {
      const CubeCheck check = is_combinatorial_cube(oct);
      out << "cube " << (check.is_cube ? "yes" : "no");
      if (!check.diagnostic.empty()) out << " (" << check.diagnostic << ')';
      out << '\n';
    } else {
      out << "cube no (point at infinity)\n";
    }
  } else {
    out << "cube n/a (needs exactly 8 points in label order 0,1,2,3,6,7,8,9)\n";
  }
  return 0;
}

struct SimulateArgs {
  int trials = 2000;
  std::uint64_t seed = 1;
  double noise_max = 0.10;
  int levels = 11;
  double radius = 6.0;
  double shell = 0.05;
  std::string out;
  std::string summary;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.noise_levels = ExperimentConfig::noise_grid(a.noise_max, a.levels);
  cfg.camera_radius = a.radius;
  cfg.camera_shell = a.shell;
  const auto records = run_noise_sweep(cfg);
  const auto rows = to_rows(records);
  emit(a.out, out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
  if (!a.summary.empty()) {
    const auto summary = summarize(rows);
    emit(a.summary, out, [&](std::ostream& os) { write_summary_csv(os, summary); });
  }
  return 0;
}

struct RegionArgs {
  int resolution = 50;
  std::vector<double> f1{2.0, 0.5, 3.0};
  std::vector<double> origin{0.0, 0.0, 0.5};
  std::vector<double> axis_u{1.0, 0.0, 0.0};
  std::vector<double> axis_v{0.0, 1.0, 0.0};
  double extent = 3.0;
  std::string cube;
  std::string method = "auto";
  std::string out;
};

int run_region(const RegionArgs& a, std::ostream& out) {
  CubeConfig C = CubeConfig::unit();
  if (!a.cube.empty()) {
    auto in = open_input(a.cube);
    const auto P = read_world_points(in);
    if (P.size() != 8) throw DataError("cube file must hold exactly 8 points");
    Octet oct;
    for (int i = 0; i < 8; ++i) oct[i] = P[i].coords();
    C = CubeConfig::validated(oct);
  }
  PlaneChart chart;
  chart.origin = vec3(a.origin);
  chart.axis_u = vec3(a.axis_u);
  chart.axis_v = vec3(a.axis_v);
  chart.u_min = chart.v_min = -a.extent;
  chart.u_max = chart.v_max = a.extent;
  RegionMethod method = RegionMethod::Auto;
  if (a.method == "general") method = RegionMethod::General;
  if (a.method == "unit") method = RegionMethod::UnitCube;
  const HomPoint3 f1(a.f1[0], a.f1[1], a.f1[2], 1.0);
  const RegionGrid grid = region_grid(C, f1, chart, a.resolution, method);
  emit(a.out, out, [&](std::ostream& os) { write_region_csv(os, grid); });
  return 0;
}

int run_exact_check(const exact::CertificateOptions& o, std::ostream& out) {
  const auto report = exact::run_exact_certificate(o);
  out << "cube_trials " << report.cube_trials << '\n';
  out << "invariant_zero " << report.invariant_zero << '\n';
  out << "veronese_rank_at_most_7 " << report.rank_at_most_seven << '\n';
  for (const auto& [rank, count] : report.observed_ranks) {
    out << "veronese_rank " << rank << ' ' << count << '\n';
  }
  out << "controls " << report.controls << '\n';
  out << "controls_nonzero " << report.controls_nonzero << '\n';
  out << "certificate " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? 0 : kDataError;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fundamental matrix estimation from eight points on a combinatorial cube"};
  app.name("cubefm");
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate F from a correspondence CSV");
  estimate->add_option("--input", est.input, "CSV with header x1,x2,x3,y1,y2,y3")->required();
  estimate->add_option("--algo", est.algo, "Estimator")
      ->check(CLI::IsMember({"8pt", "7pt", "cube8"}));

  std::string verify_input;
  auto* verify = app.add_subcommand("verify-degeneracy",
                                    "Veronese rank, Z-rank bound and cube test for world points");
  verify->add_option("--input", verify_input, "CSV with header p1,p2,p3,p4")->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo noise sweep");
  simulate->add_option("--trials", sim.trials, "Trials per noise level")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--noise-max", sim.noise_max, "Largest noise level (fraction of image size)")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--levels", sim.levels, "Number of noise levels")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--radius", sim.radius, "Camera sphere radius")->check(CLI::PositiveNumber);
  simulate->add_option("--shell", sim.shell, "Relative shell thickness")->check(CLI::Range(0.0, 0.99));
  simulate->add_option("--out", sim.out, "Sweep CSV path (default: standard output)");
  simulate->add_option("--summary", sim.summary, "Per-level summary CSV path");

  RegionArgs reg;
  auto* region = app.add_subcommand("region", "Classify the cube quadric over a plane of second focal points");
  region->add_option("--resolution", reg.resolution, "Grid points per axis")->check(CLI::Range(2, 100000));
  region->add_option("--f1", reg.f1, "First focal point x,y,z")->delimiter(',')->expected(3);
  region->add_option("--origin", reg.origin, "Chart origin x,y,z")->delimiter(',')->expected(3);
  region->add_option("--axis-u", reg.axis_u, "Chart u axis")->delimiter(',')->expected(3);
  region->add_option("--axis-v", reg.axis_v, "Chart v axis")->delimiter(',')->expected(3);
  region->add_option("--extent", reg.extent, "Half-width of the chart window")
      ->check(CLI::PositiveNumber);
  region->add_option("--cube", reg.cube, "World-point CSV with 8 vertices (default: unit cube)");
  region->add_option("--method", reg.method, "Quadric computation")
      ->check(CLI::IsMember({"auto", "general", "unit"}));
  region->add_option("--out", reg.out, "Region CSV path (default: standard output)");

  exact::CertificateOptions cert;
  bool no_projective = false;
  auto* exact_check = app.add_subcommand("exact-check", "Exact rational certificate of the cube identities");
  exact_check->add_option("--trials", cert.cube_trials, "Random rational cubes")
      ->check(CLI::PositiveNumber);
  exact_check->add_option("--controls", cert.controls, "Perturbed controls")
      ->check(CLI::NonNegativeNumber);
  exact_check->add_option("--seed", cert.seed, "Seed");
  exact_check->add_option("--max-numerator", cert.max_numerator, "Bound on sampled numerators")
      ->check(CLI::Range(2, 1000000));
  exact_check->add_flag("--no-projective", no_projective, "Skip the projective images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*estimate) return run_estimate(est, out);
    if (*verify) return run_verify(verify_input, out);
    if (*simulate) return run_simulate(sim, out);
    if (*region) return run_region(reg, out);
    if (*exact_check) {
      cert.include_projective = !no_projective;
      return run_exact_check(cert, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace cubefm
