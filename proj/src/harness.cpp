#include "cubefm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "cubefm/degeneracy.hpp"
#include "cubefm/estimators.hpp"

namespace cubefm {

namespace {

Eigen::Vector3d random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector3d d;
  do {
    d = {normal(rng), normal(rng), normal(rng)};
  } while (d.norm() < 1e-8);
  return d.normalized();
}

// Rows are the camera axes; the third one points from f toward the origin.
Camera look_at_origin(const Eigen::Vector3d& f) {
  const Eigen::Vector3d z = -f.normalized();
  const Eigen::Vector3d up =
      std::abs(z.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d x = up.cross(z).normalized();
  const Eigen::Vector3d y = z.cross(x);
  Eigen::Matrix3d R;
  R.row(0) = x;
  R.row(1) = y;
  R.row(2) = z;
  Matrix34 A;
  A.leftCols<3>() = R;
  A.col(3) = -R * f;
  return Camera(A);
}

AlgoOutcome failure() {
  return {kFailureAngle, std::numeric_limits<double>::quiet_NaN(), true};
}

AlgoOutcome score(const FMatrix& F, const FMatrix& truth, std::span<const HomPoint2> X,
                  std::span<const HomPoint2> Y) {
  return {grassmann_angle(F, truth), epipolar_residual(F, X, Y), false};
}

}  // namespace

std::pair<Camera, Camera> sample_camera_pair(std::mt19937_64& rng, double radius, double shell) {
  if (!(radius > 0.0) || shell < 0.0 || shell >= 1.0) {
    throw Error(Errc::InvalidArgument, "camera radius must be positive and shell in [0, 1)");
  }
  std::uniform_real_distribution<double> r(radius * (1.0 - shell), radius * (1.0 + shell));
  const Eigen::Vector3d f1 = r(rng) * random_direction(rng);
  Eigen::Vector3d f2;
  do {
    f2 = r(rng) * random_direction(rng);
  } while ((f1 - f2).norm() < radius / 10.0);
  return {look_at_origin(f1), look_at_origin(f2)};
}

double bounding_box_diagonal(std::span<const HomPoint2> pts) {
  if (pts.empty()) return 0.0;
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (const auto& p : pts) {
    const Eigen::Vector2d a = p.affine();
    lo = lo.cwiseMin(a);
    hi = hi.cwiseMax(a);
  }
  return (hi - lo).norm();
}

std::vector<HomPoint2> add_noise(std::span<const HomPoint2> pts, double sigma_frac,
                                 std::mt19937_64& rng) {
  if (sigma_frac < 0.0) throw Error(Errc::InvalidArgument, "noise level must be non-negative");
  std::vector<HomPoint2> out(pts.begin(), pts.end());
  if (sigma_frac == 0.0) return out;
  const double sigma = sigma_frac * bounding_box_diagonal(pts);
  if (sigma == 0.0) return out;
  std::normal_distribution<double> normal(0.0, sigma);
  for (auto& p : out) {
    const Eigen::Vector2d a = p.affine();
    p = HomPoint2(a.x() + normal(rng), a.y() + normal(rng), 1.0);
  }
  return out;
}

const char* to_string(Algo algo) noexcept {
  switch (algo) {
    case Algo::EightPoint: return "8pt";
    case Algo::SevenPoint: return "7pt";
    case Algo::Cube8: return "cube8";
  }
  return "?";
}

Algo parse_algo(const std::string& name) {
  for (Algo a : kAllAlgos) {
    if (name == to_string(a)) return a;
  }
  throw Error(Errc::InvalidArgument, "unknown algorithm '" + name + "'");
}

std::vector<double> ExperimentConfig::noise_grid(double max, int levels) {
  if (levels < 1 || max < 0.0) throw Error(Errc::InvalidArgument, "bad noise grid");
  if (levels == 1) return {0.0};
  std::vector<double> grid(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) grid[i] = max * i / (levels - 1);
  return grid;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

TrialRecord run_trial(const ExperimentConfig& cfg, int trial, std::size_t level) {
  TrialRecord rec;
  rec.trial = trial;
  rec.noise = cfg.noise_levels.at(level);
  rec.cube_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), 0);
  rec.cam_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), 1);

  std::mt19937_64 cube_rng(rec.cube_seed);
  std::mt19937_64 cam_rng(rec.cam_seed);
  std::mt19937_64 noise_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), 2));

  const CubeConfig cube = random_combinatorial_cube(cube_rng, cfg.cube_spread);
  const auto [A1, A2] = sample_camera_pair(cam_rng, cfg.camera_radius, cfg.camera_shell);

  std::vector<HomPoint2> X0, Y0;
  for (const auto& v : cube.vertices()) {
    Eigen::Vector4d p = v;
    p.head<3>() *= cfg.cube_box;
    X0.push_back(project(A1, HomPoint3(p)));
    Y0.push_back(project(A2, HomPoint3(p)));
  }
  const auto X = add_noise(X0, rec.noise, noise_rng);
  const auto Y = add_noise(Y0, rec.noise, noise_rng);
  const FMatrix truth = fundamental_from_cameras(A1, A2);

  try {
    rec.outcomes[0] = score(eight_point(X, Y), truth, X, Y);
  } catch (const Error&) {
    rec.outcomes[0] = failure();
  }

  try {
    const auto pencil = seven_point(std::span(X).first(7), std::span(Y).first(7));
    AlgoOutcome best = failure();
    for (const auto& cand : pencil.candidates) {
      const AlgoOutcome o = score(cand, truth, X, Y);
      // Same tie rule as cube_eight_point: near-equal residuals keep the earlier root.
      if (best.failed || o.residual < best.residual - 1e-14) best = o;
    }
    rec.outcomes[1] = best;
  } catch (const Error&) {
    rec.outcomes[1] = failure();
  }

  try {
    rec.outcomes[2] = score(cube_eight_point(X, Y), truth, X, Y);
  } catch (const Error&) {
    rec.outcomes[2] = failure();
  }
  return rec;
}

std::vector<TrialRecord> run_noise_sweep(const ExperimentConfig& cfg) {
  if (cfg.trials < 0) throw Error(Errc::InvalidArgument, "trial count must be non-negative");
  std::vector<TrialRecord> out;
  out.reserve(cfg.noise_levels.size() * static_cast<std::size_t>(cfg.trials));
  for (std::size_t level = 0; level < cfg.noise_levels.size(); ++level) {
    for (int t = 0; t < cfg.trials; ++t) out.push_back(run_trial(cfg, t, level));
  }
  return out;
}

std::vector<SweepRow> to_rows(std::span<const TrialRecord> records) {
  std::vector<SweepRow> rows;
  rows.reserve(records.size() * kAllAlgos.size());
  for (const auto& r : records) {
    for (std::size_t k = 0; k < kAllAlgos.size(); ++k) {
      const auto& o = r.outcomes[k];
      rows.push_back({r.trial, r.noise, kAllAlgos[k], o.angle_rad, o.residual, o.failed,
                      r.cube_seed, r.cam_seed});
    }
  }
  return rows;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<LevelSummary> summarize(std::span<const SweepRow> rows) {
  std::map<std::pair<double, int>, std::vector<const SweepRow*>> groups;
  for (const auto& r : rows) groups[{r.noise, static_cast<int>(r.algo)}].push_back(&r);

  std::vector<LevelSummary> out;
  for (const auto& [key, group] : groups) {
    LevelSummary s;
    s.noise = key.first;
    s.algo = static_cast<Algo>(key.second);
    s.count = static_cast<int>(group.size());
    std::vector<double> angles;
    int failed = 0;
    for (const SweepRow* r : group) {
      angles.push_back(r->angle_rad);
      failed += r->failed;
    }
    s.mean_angle = std::accumulate(angles.begin(), angles.end(), 0.0) / s.count;
    s.median_angle = median(std::move(angles));
    s.failure_rate = static_cast<double>(failed) / s.count;
    out.push_back(s);
  }
  return out;
}

}  // namespace cubefm
