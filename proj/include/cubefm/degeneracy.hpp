#pragma once

// Veronese lift, the epipolar constraint matrix Z, numerical kernels, the
// reduced ten-point bracket invariant and combinatorial cubes.
//
// Cube vertices carry the labels 0,1,2,3,6,7,8,9; labels 4 and 5 are reserved
// for the two focal points in a ten-point configuration. In the normal form
// vertex 0 is the origin, 3, 2, 9 are e1, e2, e3 and the six facets are
// {0,1,2,3} {6,7,8,9} {0,3,6,9} {1,2,7,8} {0,2,7,9} {1,3,6,8}.

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cubefm/core.hpp"

namespace cubefm {

using Veronese = Eigen::Matrix<double, 10, 1>;

Veronese veronese24(const HomPoint3& p);

// n x 10, row i = veronese24(P[i]).
Eigen::MatrixXd veronese_matrix(std::span<const HomPoint3> P);

// n x 9, row i = kron(Y[i], X[i]) so that row . vec_rowmajor(F) = Y^T F X.
Eigen::MatrixXd build_Z(std::span<const HomPoint2> X, std::span<const HomPoint2> Y);

// Orthonormal basis of the right singular vectors whose singular values are
// at most rank_tol * sigma_max (all of R^m for a zero matrix).
std::vector<Eigen::VectorXd> kernel_basis(const Eigen::MatrixXd& M,
                                          double rank_tol = kDefaultTol);

int numerical_rank(const Eigen::MatrixXd& M, double rank_tol = kDefaultTol);

// Determinant of the 4x4 matrix with rows a, b, c, d.
double bracket(const Eigen::Vector4d& a, const Eigen::Vector4d& b, const Eigen::Vector4d& c,
               const Eigen::Vector4d& d);

inline constexpr std::array<int, 8> kCubeLabels{0, 1, 2, 3, 6, 7, 8, 9};
inline constexpr std::array<std::array<int, 4>, 6> kCubeFacets{{
    {0, 1, 2, 3}, {6, 7, 8, 9}, {0, 3, 6, 9}, {1, 2, 7, 8}, {0, 2, 7, 9}, {1, 3, 6, 8}}};

// Position of a cube label inside an 8-element vertex array; throws for 4, 5
// and anything outside 0..9.
int cube_slot(int label);

// Eight points in label order 0,1,2,3,6,7,8,9.
using Octet = std::array<Eigen::Vector4d, 8>;

struct CubeCheck {
  bool is_cube = false;
  std::string diagnostic;
  double max_facet_residual = 0.0;  // largest scaled facet determinant
  double min_side_margin = 0.0;     // smallest scaled distance of a non-incident vertex
};

CubeCheck is_combinatorial_cube(const Octet& vertices, double tol = kDefaultTol);

class CubeConfig {
 public:
  // Throws InvalidArgument with the diagnostic if the octet is not a cube.
  static CubeConfig validated(const Octet& vertices, double tol = kDefaultTol);

  // Vertices (+-1, +-1, +-1, 1): the normal-form unit cube mapped by x -> 2x - 1.
  static CubeConfig unit();

  const Eigen::Vector4d& vertex(int label) const { return v_[cube_slot(label)]; }
  const Octet& vertices() const noexcept { return v_; }
  std::vector<HomPoint3> points() const;

 private:
  explicit CubeConfig(const Octet& v) : v_(v) {}
  Octet v_;
};

// Ten points indexed by label 0..9; labels 4, 5 are the focal points.
struct ConfigTen {
  std::array<Eigen::Vector4d, 10> points;

  static ConfigTen from_cube(const Octet& cube, const Eigen::Vector4d& f1,
                             const Eigen::Vector4d& f2);
  static ConfigTen from_cube(const CubeConfig& cube, const HomPoint3& f1, const HomPoint3& f2) {
    return from_cube(cube.vertices(), f1.coords(), f2.coords());
  }
};

// The four-monomial degree-five bracket polynomial obtained from the
// Turnbull-Young invariant under the cube labeling.
double turnbull_young_reduced(const ConfigTen& c);

// Free parameters of the normal form: vertex 1 = (x1, x2, 0),
// vertex 6 = (x5, 0, x6), vertex 7 = (0, x3, x4).
struct CubeParams {
  Eigen::Vector3d v1;
  Eigen::Vector3d v6;
  Eigen::Vector3d v7;
};

// Vertex 8 as the common point of planes span{1,2,7}, span{1,3,6},
// span{6,7,9}. Empty if the three planes are too close to dependent or meet
// at infinity.
std::optional<Eigen::Vector3d> close_vertex8(const CubeParams& params, double tol = 1e-6);

// Normal-form octet for the parameters; empty when vertex 8 is undefined.
std::optional<Octet> cube_from_params(const CubeParams& params);

struct CubeSamplingOptions {
  int max_retries = 1000;
  double tol = kDefaultTol;
};

struct SampledCube {
  CubeConfig cube;
  CubeParams params;
  Eigen::Matrix4d affine;  // maps the normal form onto `cube`
};

SampledCube sample_combinatorial_cube(std::mt19937_64& rng, double spread,
                                      const CubeSamplingOptions& options = {});

CubeConfig random_combinatorial_cube(std::mt19937_64& rng, double spread,
                                     const CubeSamplingOptions& options = {});

}  // namespace cubefm
