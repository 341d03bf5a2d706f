#pragma once

// Synthetic two-view experiments on combinatorial cubes.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cubefm/core.hpp"

namespace cubefm {

// Two cameras [R | -R f] looking at the origin with focal points f on the
// shell radius * [1 - shell, 1 + shell], at least radius / 10 apart.
std::pair<Camera, Camera> sample_camera_pair(std::mt19937_64& rng, double radius,
                                             double shell = 0.05);

double bounding_box_diagonal(std::span<const HomPoint2> pts);

// Adds i.i.d. N(0, (sigma_frac * bbox diagonal)^2) offsets to the affine
// coordinates. sigma_frac = 0 returns the points unchanged.
std::vector<HomPoint2> add_noise(std::span<const HomPoint2> pts, double sigma_frac,
                                 std::mt19937_64& rng);

enum class Algo { EightPoint, SevenPoint, Cube8 };
inline constexpr std::array<Algo, 3> kAllAlgos{Algo::EightPoint, Algo::SevenPoint, Algo::Cube8};

const char* to_string(Algo algo) noexcept;  // "8pt", "7pt", "cube8"
Algo parse_algo(const std::string& name);

struct AlgoOutcome {
  double angle_rad = 0.0;
  double residual = 0.0;
  bool failed = false;
};

// Angle recorded for a failed estimate.
inline constexpr double kFailureAngle = 1.57079632679489661923;

struct TrialRecord {
  int trial = 0;
  double noise = 0.0;
  std::array<AlgoOutcome, 3> outcomes;  // indexed like kAllAlgos
  std::uint64_t cube_seed = 0;
  std::uint64_t cam_seed = 0;
};

struct ExperimentConfig {
  int trials = 2000;
  std::vector<double> noise_levels = noise_grid(0.10, 11);
  double cube_box = 1.0;      // cubes are fitted into [-cube_box, cube_box]^3
  double cube_spread = 2.0;   // range of the free normal-form coordinates
  double camera_radius = 6.0;
  double camera_shell = 0.05;
  std::uint64_t seed = 1;

  static std::vector<double> noise_grid(double max, int levels);
};

// Per-trial stream seed; pure function of (master, trial, stream).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream);

// One trial at one noise level. The cube and cameras depend only on the trial
// index, so every noise level sees the same geometry.
TrialRecord run_trial(const ExperimentConfig& cfg, int trial, std::size_t level);

// Rows ordered by noise level, then trial index.
std::vector<TrialRecord> run_noise_sweep(const ExperimentConfig& cfg);

// One row of the sweep CSV.
struct SweepRow {
  int trial = 0;
  double noise = 0.0;
  Algo algo = Algo::Cube8;
  double angle_rad = 0.0;
  double residual = 0.0;
  bool failed = false;
  std::uint64_t cube_seed = 0;
  std::uint64_t cam_seed = 0;
};

std::vector<SweepRow> to_rows(std::span<const TrialRecord> records);

struct LevelSummary {
  double noise = 0.0;
  Algo algo = Algo::Cube8;
  double mean_angle = 0.0;
  double median_angle = 0.0;
  double failure_rate = 0.0;
  int count = 0;
};

// Grouped by noise level (ascending) then algorithm in kAllAlgos order.
std::vector<LevelSummary> summarize(std::span<const SweepRow> rows);

double median(std::vector<double> values);

}  // namespace cubefm
