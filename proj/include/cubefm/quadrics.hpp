#pragma once

// Quadrics through cube vertices and focal points, inertia classification,
// and the focal-point regions in which reconstruction from a cube fails.

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

#include "cubefm/core.hpp"
#include "cubefm/degeneracy.hpp"

namespace cubefm {

// Symmetric 4x4 matrix up to scale, stored at unit Frobenius norm with the
// first nonzero entry positive.
class SymQuadric {
 public:
  explicit SymQuadric(const Eigen::Matrix4d& q);

  // Coefficients in veronese24 order; off-diagonal monomials are split
  // evenly between Q_ij and Q_ji.
  static SymQuadric from_coefficients(const Veronese& coeffs);

  const Eigen::Matrix4d& matrix() const noexcept { return q_; }

  // p^T Q p for the stored representative.
  double evaluate(const Eigen::Vector4d& p) const { return p.dot(q_ * p); }

 private:
  Eigen::Matrix4d q_;
};

bool equal_up_to_scale(const SymQuadric& a, const SymQuadric& b, double tol = 1e-9);

enum class QuadricTag { RuledNondegenerate, NonruledNondegenerate, Empty, Degenerate };

const char* to_string(QuadricTag tag) noexcept;

struct QuadricClass {
  QuadricTag tag = QuadricTag::Degenerate;
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 4;
  // Smallest |eigenvalue| over the largest; 0 for degenerate quadrics.
  double margin = 0.0;

  bool operator==(const QuadricClass& o) const {
    return tag == o.tag && n_plus == o.n_plus && n_minus == o.n_minus && n_zero == o.n_zero;
  }
};

// Inertia from the symmetric eigendecomposition; eigenvalues within
// zero_tol * max|eigenvalue| count as zero. Canonicalized to n_plus >= n_minus.
QuadricClass classify(const SymQuadric& Q, double zero_tol = kDefaultTol);
QuadricClass classify(const Eigen::Matrix4d& Q, double zero_tol = kDefaultTol);

// Unique quadric through 9 or 10 points. PencilOfQuadrics when the Veronese
// matrix has rank below 9, NoQuadric when it has rank 10.
SymQuadric quadric_through_points(std::span<const HomPoint3> P, double rank_tol = kDefaultTol);

// diag(alpha, beta, gamma, delta) from the signed maximal minors of
// [1 1 1 1; f1.^2; f2.^2]: the quadric through the (+-1, +-1, +-1) cube and
// both focal points. RankDeficient when the minors all vanish.
Eigen::Vector4d unit_cube_diagonal(const HomPoint3& f1, const HomPoint3& f2,
                                   double tol = kDefaultTol);
SymQuadric unit_cube_quadric(const HomPoint3& f1, const HomPoint3& f2, double tol = kDefaultTol);

// Ruledness of diag(alpha, beta, -alpha - beta - 1, 1).
bool ruled_region_delta1(double alpha, double beta);

struct Delta1Coordinates {
  double alpha;
  double beta;
};

// The unit-cube quadric scaled so its last diagonal entry is 1, solved with
// 2x2 determinants. AtInfinity when that entry vanishes.
Delta1Coordinates delta1_coordinates(const HomPoint3& f1, const HomPoint3& f2,
                                     double tol = kDefaultTol);

// Projective map T with T * u_i ~ C_i for the eight labeled vertices u_i of
// CubeConfig::unit(). Empty when no such map exists (relative residual of
// the homogeneous system above `tol`).
std::optional<Eigen::Matrix4d> transport_from_unit_cube(const CubeConfig& C, double tol = 1e-8);

// Affine chart of a plane in R^3: point(u, v) = origin + u * axis_u + v * axis_v.
struct PlaneChart {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis_u = Eigen::Vector3d::UnitX();
  Eigen::Vector3d axis_v = Eigen::Vector3d::UnitY();
  double u_min = -1.0, u_max = 1.0;
  double v_min = -1.0, v_max = 1.0;

  Eigen::Vector3d point(double u, double v) const { return origin + u * axis_u + v * axis_v; }
};

struct RegionCell {
  double u = 0.0;
  double v = 0.0;
  QuadricClass cls;
  bool rank_deficient = false;  // no unique quadric through the ten points

  // Ruled and degenerate quadrics both count as failure cells.
  bool failure() const {
    return cls.tag == QuadricTag::RuledNondegenerate || cls.tag == QuadricTag::Degenerate;
  }
};

enum class RegionMethod { Auto, General, UnitCube };

// Cells are ordered with v in the outer loop and u in the inner loop, both
// ascending over resolution evenly spaced values including the endpoints.
struct RegionGrid {
  int resolution = 0;
  std::vector<RegionCell> cells;

  const RegionCell& at(int iu, int iv) const { return cells[static_cast<std::size_t>(iv) * resolution + iu]; }
};

bool is_unit_cube(const CubeConfig& C, double tol = 1e-12);

RegionGrid region_grid(const CubeConfig& C, const HomPoint3& f1, const PlaneChart& chart,
                       int resolution, RegionMethod method = RegionMethod::Auto);

}  // namespace cubefm
