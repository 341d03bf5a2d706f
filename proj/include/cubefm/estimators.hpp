#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "cubefm/core.hpp"

namespace cubefm {

// Isotropic conditioning: translation to zero centroid followed by scaling
// to RMS radius sqrt(2). transformed = T * original.
struct NormalizationTransform {
  Eigen::Matrix3d T = Eigen::Matrix3d::Identity();
};

std::pair<NormalizationTransform, std::vector<HomPoint2>> hartley_normalize(
    std::span<const HomPoint2> pts);

// Noise-free 8-point algorithm: the kernel of Z must be one-dimensional,
// otherwise DegenerateInput is thrown with the observed dimension.
FMatrix eight_point(std::span<const HomPoint2> X, std::span<const HomPoint2> Y,
                    double rank_tol = kDefaultTol);

// F = [e2]_x A2 A1^+ with e2 the image of the first focal point.
FMatrix fundamental_from_cameras(const Camera& A1, const Camera& A2);

// Coefficients c0..c3 of det(a F1 + (1 - a) F2) = c0 + c1 a + c2 a^2 + c3 a^3,
// recovered by interpolating the determinant at a = -1, 0, 1, 2.
std::array<double, 4> pencil_cubic(const Eigen::Matrix3d& F1, const Eigen::Matrix3d& F2);

// Real roots of c0 + c1 x + ... (coefficients low to high) via companion
// matrix eigenvalues, sorted ascending and deduplicated. Leading coefficients
// below `degree_tol` relative to the largest are dropped first.
std::vector<double> real_roots(std::span<const double> coeffs, double degree_tol = 1e-12);

struct PencilSolution {
  std::vector<double> roots;          // ascending
  std::vector<FMatrix> candidates;    // candidates[i] ~ roots[i] F1 + (1 - roots[i]) F2
};

PencilSolution pencil_solve(const Eigen::Matrix3d& F1, const Eigen::Matrix3d& F2);

// 7-point algorithm on the kernel of Z built from the given points. With
// `normalize` the pencil is formed in conditioned coordinates instead and the
// candidates are mapped back; roots then refer to the conditioned generators.
PencilSolution seven_point(std::span<const HomPoint2> X, std::span<const HomPoint2> Y,
                           bool normalize = false, double rank_tol = kDefaultTol);

// Nearest rank-k matrix in Frobenius norm.
struct RankTruncation {
  Eigen::MatrixXd truncated;
  Eigen::VectorXd singular_values;  // of the input, descending
  Eigen::MatrixXd V;                // full right singular basis
  double discarded_norm = 0.0;      // sqrt of the sum of squared dropped values
};

RankTruncation truncate_rank(const Eigen::MatrixXd& M, int rank);

struct CubeEightPointReport {
  FMatrix F;
  PencilSolution pencil;
  std::vector<FMatrix> candidates;  // in input coordinates, same order as pencil.roots
  std::vector<double> residuals;    // epipolar_residual of each candidate on X, Y
  std::size_t chosen = 0;
  RankTruncation truncation;
};

CubeEightPointReport cube_eight_point_report(std::span<const HomPoint2> X,
                                             std::span<const HomPoint2> Y,
                                             bool normalize = true);

FMatrix cube_eight_point(std::span<const HomPoint2> X, std::span<const HomPoint2> Y,
                         bool normalize = true);

}  // namespace cubefm
