// End-to-end acceptance run: one PASS/FAIL line per criterion, non-zero exit
// status if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cubefm/degeneracy.hpp"
#include "cubefm/estimators.hpp"
#include "cubefm/exact.hpp"
#include "cubefm/harness.hpp"
#include "cubefm/quadrics.hpp"
#include "support.hpp"

using namespace cubefm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. Printed two-camera cube fixture.
Outcome fixture_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto X = support::fixture_X();
  const auto Y = support::fixture_Y();
  const Eigen::MatrixXd Z = build_Z(X, Y);
  const bool exact_Z = Z == Eigen::MatrixXd(support::fixture_Z());
  const auto K = kernel_basis(Z);
  const bool dim2 = K.size() == 2;
  double angle = M_PI / 2;
  std::size_t members = 0;
  if (dim2) {
    const auto sol = pencil_solve(Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(K[0].data()),
                                  Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(K[1].data()));
    members = sol.candidates.size();
    if (members == 1) angle = grassmann_angle(sol.candidates[0], FMatrix(support::fixture_F()));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = exact_Z && dim2 && members == 1 && angle < 1e-10 && secs < 1.0;
  o.detail = std::string("Z exact=") + (exact_Z ? "yes" : "no") + " kernel_dim=" +
             std::to_string(K.size()) + " rank2_members=" + std::to_string(members) +
             fmt(" angle=%.3g", angle) + fmt(" time=%.3fs", secs);
  return o;
}

// 2. Cube images defeat the plain 8-point algorithm.
Outcome cube_rank_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  int rank_ok = 0, degenerate = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(2, t, 0));
    const CubeConfig C = random_combinatorial_cube(rng, 2.0);
    const auto v = support::project_all(support::octet_points(C), rng);
    rank_ok += numerical_rank(build_Z(v.X, v.Y)) <= 7;
    try {
      eight_point(v.X, v.Y);
    } catch (const Error& e) {
      degenerate += e.code() == Errc::DegenerateInput;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = rank_ok == trials && degenerate >= 0.99 * trials && secs < 30.0;
  o.detail = "rank<=7 " + std::to_string(rank_ok) + "/" + std::to_string(trials) +
             ", DegenerateInput " + std::to_string(degenerate) + "/" + std::to_string(trials) +
             fmt(" time=%.2fs", secs);
  return o;
}

// 3. Exact rational certificate.
Outcome exact_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  exact::CertificateOptions opt;
  opt.cube_trials = 100;
  opt.controls = 20;
  const auto r = exact::run_exact_certificate(opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = r.passed() && r.cube_trials == 100 && r.controls >= 20 && secs < 120.0;
  o.detail = "invariant zero " + std::to_string(r.invariant_zero) + "/" +
             std::to_string(r.cube_trials) + ", rank<=7 " + std::to_string(r.rank_at_most_seven) +
             ", controls nonzero " + std::to_string(r.controls_nonzero) + "/" +
             std::to_string(r.controls) + fmt(" time=%.2fs", secs);
  return o;
}

// 4. rank(Z) <= rank of the Veronese lift, over mixed configurations.
Outcome rank_bound_criterion() {
  int ok = 0;
  std::map<std::string, int> kinds;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(4, t, 0));
    std::uniform_int_distribution<int> count(8, 12);
    const int n = count(rng);
    std::vector<Eigen::Vector4d> P;
    std::string kind;
    switch (t % 4) {
      case 0: {  // cube plus random extras
        const auto C = random_combinatorial_cube(rng, 2.0);
        P = support::octet_points(C);
        while (static_cast<int>(P.size()) < n) P.push_back(support::random_point(rng));
        kind = "cube";
        break;
      }
      case 1:  // generic points
        while (static_cast<int>(P.size()) < n) P.push_back(support::random_point(rng));
        kind = "generic";
        break;
      case 2: {  // points on a plane
        const Eigen::Vector4d a = support::random_point(rng), b = support::random_point(rng),
                              c = support::random_point(rng);
        std::uniform_real_distribution<double> w(0.1, 1.0);
        while (static_cast<int>(P.size()) < n) {
          const double s = w(rng), u = w(rng), v = w(rng);
          P.push_back((s * a + u * b + v * c) / (s + u + v));
        }
        kind = "planar";
        break;
      }
      default: {  // points on an ellipsoid
        std::normal_distribution<double> g(0.0, 1.0);
        while (static_cast<int>(P.size()) < n) {
          Eigen::Vector3d d(g(rng), g(rng), g(rng));
          d = d.normalized().cwiseProduct(Eigen::Vector3d(1.0, 0.7, 0.5));
          P.push_back({d.x(), d.y(), d.z(), 1.0});
        }
        kind = "quadric";
        break;
      }
    }
    std::vector<HomPoint3> H;
    for (const auto& p : P) H.emplace_back(p);
    const auto v = support::project_all(P, rng);
    const int rz = numerical_rank(build_Z(v.X, v.Y), 1e-10);
    const int rv = numerical_rank(veronese_matrix(H), 1e-10);
    if (rz <= rv) {
      ++ok;
      ++kinds[kind];
    }
  }
  Outcome o;
  o.pass = ok == trials;
  o.detail = std::to_string(ok) + "/" + std::to_string(trials) + " (";
  for (const auto& [k, c] : kinds) o.detail += k + "=" + std::to_string(c) + " ";
  o.detail.back() = ')';
  return o;
}

// 5. The cube estimator is exact on noise-free non-ruled configurations.
Outcome cube_exactness_criterion() {
  int accepted = 0, good = 0, scanned = 0;
  double worst = 0.0;
  for (int t = 0; accepted < 200 && t < 100000; ++t) {
    ++scanned;
    std::mt19937_64 rng(derive_seed(5, t, 0));
    const CubeConfig C = random_combinatorial_cube(rng, 2.0);
    const auto v = support::project_all(support::octet_points(C), rng);
    auto P = C.points();
    P.push_back(focal_point(v.A1));
    P.push_back(focal_point(v.A2));
    if (classify(quadric_through_points(P)).tag != QuadricTag::NonruledNondegenerate) continue;
    ++accepted;
    const double a = grassmann_angle(cube_eight_point(v.X, v.Y), fundamental_from_cameras(v.A1, v.A2));
    worst = std::max(worst, a);
    good += a < 1e-6;
  }
  Outcome o;
  o.pass = accepted == 200 && good >= 0.99 * accepted;
  o.detail = std::to_string(good) + "/" + std::to_string(accepted) + " below 1e-6 (" +
             std::to_string(scanned) + " cubes scanned)" + fmt(", worst angle %.3g", worst);
  return o;
}

// 6. Noise sweep: the cube estimator beats the 7-point baseline and degrades
// monotonically.
Outcome sweep_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.trials = 300;
  cfg.noise_levels = ExperimentConfig::noise_grid(0.10, 6);
  cfg.seed = 1;
  const auto rows = to_rows(run_noise_sweep(cfg));
  const auto summary = summarize(rows);
  std::map<double, std::map<Algo, double>> med;
  for (const auto& s : summary) med[s.noise][s.algo] = s.median_angle;
  bool beats = true, monotone = true;
  double prev = -1.0;
  std::string d;
  for (const auto& [noise, m] : med) {
    const double c8 = m.at(Algo::Cube8), s7 = m.at(Algo::SevenPoint);
    const bool b = c8 <= s7;
    const bool mono = c8 >= prev;
    beats = beats && b;
    monotone = monotone && mono;
    prev = c8;
    char buf[160];
    std::snprintf(buf, sizeof buf, " [%.2f: cube8 %.4g%s 7pt %.4g%s]", noise, c8, b ? "<=" : ">", s7,
                  mono ? "" : " decreased");
    d += buf;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = beats && monotone && secs < 300.0;
  o.detail = std::string("cube8<=7pt ") + (beats ? "yes" : "no") + ", non-decreasing " +
             (monotone ? "yes" : "no") + fmt(", time=%.2fs;", secs) + d;
  return o;
}

// 7. Three ways of computing the unit-cube quadric agree cell by cell.
Outcome region_criterion() {
  const CubeConfig C = CubeConfig::unit();
  const HomPoint3 f1(2.0, 0.5, 3.0, 1.0);
  PlaneChart chart;
  chart.origin = {0.0, 0.0, 0.5};
  chart.u_min = chart.v_min = -3.0;
  chart.u_max = chart.v_max = 3.0;
  const int res = 50;
  const RegionGrid fast = region_grid(C, f1, chart, res, RegionMethod::UnitCube);
  const RegionGrid general = region_grid(C, f1, chart, res, RegionMethod::General);
  int compared = 0, agree = 0, closed_compared = 0, closed_agree = 0, ruled = 0, nonruled = 0;
  for (std::size_t i = 0; i < fast.cells.size(); ++i) {
    const auto& a = fast.cells[i];
    const auto& b = general.cells[i];
    ruled += a.cls.tag == QuadricTag::RuledNondegenerate;
    nonruled += a.cls.tag == QuadricTag::NonruledNondegenerate;
    if (a.rank_deficient || !(a.cls.margin > 1e-6)) continue;
    ++compared;
    agree += a.cls == b.cls;
    const Eigen::Vector3d p = chart.point(a.u, a.v);
    try {
      const auto d = delta1_coordinates(f1, HomPoint3(p.x(), p.y(), p.z(), 1.0));
      const Eigen::Vector4d diag(d.alpha, d.beta, -d.alpha - d.beta - 1.0, 1.0);
      ++closed_compared;
      const QuadricClass c = classify(Eigen::Matrix4d(diag.asDiagonal()));
      closed_agree += c == a.cls &&
                      ruled_region_delta1(d.alpha, d.beta) == (a.cls.tag == QuadricTag::RuledNondegenerate);
    } catch (const Error&) {
      // closed form undefined here
    }
  }
  Outcome o;
  o.pass = agree == compared && closed_agree == closed_compared && ruled > 0 && nonruled > 0;
  o.detail = "general fit " + std::to_string(agree) + "/" + std::to_string(compared) +
             ", closed form " + std::to_string(closed_agree) + "/" + std::to_string(closed_compared) +
             ", ruled cells " + std::to_string(ruled) + ", non-ruled cells " + std::to_string(nonruled);
  return o;
}

// 8. Inertia is preserved under projective transport of the configuration.
Outcome transport_criterion() {
  int ok = 0;
  const int trials = 100;
  const auto U = CubeConfig::unit();
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(8, t, 0));
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Matrix4d T;
    do {
      for (int i = 0; i < 16; ++i) T(i / 4, i % 4) = g(rng);
    } while (std::abs(T.determinant()) < 0.1);
    const Eigen::Vector4d g1 = support::random_point(rng, 3.0), g2 = support::random_point(rng, 3.0);
    std::vector<HomPoint3> base, moved;
    for (const auto& v : U.vertices()) {
      base.emplace_back(v);
      moved.emplace_back(Eigen::Vector4d(T * v));
    }
    base.emplace_back(g1);
    base.emplace_back(g2);
    moved.emplace_back(Eigen::Vector4d(T * g1));
    moved.emplace_back(Eigen::Vector4d(T * g2));
    ok += classify(quadric_through_points(moved)) == classify(quadric_through_points(base));
  }
  Outcome o;
  o.pass = ok == trials;
  o.detail = std::to_string(ok) + "/" + std::to_string(trials) + " classes preserved";
  return o;
}

// 9. Pencil roots are singular members; rank truncation error equals sigma_8.
Outcome kernels_criterion() {
  double worst_det = 0.0, worst_ey = 0.0;
  int candidates = 0;
  for (int t = 0; t < 500; ++t) {
    std::mt19937_64 rng(derive_seed(9, t, 0));
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Matrix3d F1, F2;
    for (int i = 0; i < 9; ++i) {
      F1(i / 3, i % 3) = g(rng);
      F2(i / 3, i % 3) = g(rng);
    }
    const auto sol = pencil_solve(F1, F2);
    for (const auto& F : sol.candidates) {
      worst_det = std::max(worst_det, std::abs(F.matrix().determinant()));
      ++candidates;
    }
    Eigen::MatrixXd Z(8, 9);
    if (t % 2 == 0) {
      for (int i = 0; i < 72; ++i) Z(i / 9, i % 9) = g(rng);
    } else {
      const auto C = random_combinatorial_cube(rng, 2.0);
      auto v = support::project_all(support::octet_points(C), rng);
      v.X = add_noise(v.X, 0.01, rng);
      v.Y = add_noise(v.Y, 0.01, rng);
      Z = build_Z(v.X, v.Y);
    }
    const auto tr = truncate_rank(Z, 7);
    const double s8 = tr.singular_values[7];
    worst_ey = std::max(worst_ey, std::abs((Z - tr.truncated).norm() - s8) / s8);
  }
  Outcome o;
  o.pass = worst_det <= 1e-9 && worst_ey <= 1e-12;
  o.detail = std::to_string(candidates) + " candidates" + fmt(", worst |det| %.3g", worst_det) +
             fmt(", worst truncation error %.3g relative", worst_ey);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"printed cube fixture: Z, kernel, unique rank-2 member", fixture_criterion},
      {"cube images: rank(Z) <= 7 and 8-point degeneracy", cube_rank_criterion},
      {"exact rational certificate", exact_criterion},
      {"rank(Z) <= rank of Veronese lift", rank_bound_criterion},
      {"cube 8-point exact on non-ruled configurations", cube_exactness_criterion},
      {"noise sweep ordering and monotonicity", sweep_criterion},
      {"region grid: fast path, closed form, general fit agree", region_criterion},
      {"inertia preserved under projective transport", transport_criterion},
      {"pencil roots singular, truncation error = sigma_8", kernels_criterion},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu %s: %s | %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
