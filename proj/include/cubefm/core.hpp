#pragma once

// Homogeneous points, pinhole cameras, fundamental matrices and the
// subspace-angle metric shared by the rest of the library.

#include <Eigen/Dense>

#include <span>

#include "cubefm/errors.hpp"

namespace cubefm {

using Matrix34 = Eigen::Matrix<double, 3, 4>;
using Vector9 = Eigen::Matrix<double, 9, 1>;

// Relative tolerance used by every rank and zero test in the library unless a
// caller passes an explicit value.
inline constexpr double kDefaultTol = 1e-10;

// Projective point with N homogeneous coordinates, not all zero. Coordinates
// are stored as given; equality is up to nonzero scale.
template <int N>
class HomPoint {
 public:
  using Coords = Eigen::Matrix<double, N, 1>;

  explicit HomPoint(const Coords& coords) : coords_(coords) {
    if (!(coords_.array() != 0.0).any()) {
      throw Error(Errc::ZeroVector, "homogeneous point with all coordinates zero");
    }
  }

  template <typename... Ts>
    requires(sizeof...(Ts) == N)
  explicit HomPoint(Ts... values) : HomPoint(Coords{static_cast<double>(values)...}) {}

  const Coords& coords() const noexcept { return coords_; }
  double operator[](int i) const { return coords_[i]; }

  // Unit-norm representative whose first nonzero coordinate is positive.
  Coords canonical() const {
    Coords c = coords_.normalized();
    for (int i = 0; i < N; ++i) {
      if (c[i] != 0.0) {
        if (c[i] < 0.0) c = -c;
        break;
      }
    }
    return c;
  }

  bool is_affine(double tol = kDefaultTol) const {
    return std::abs(coords_[N - 1]) > tol * coords_.norm();
  }

  // Dehomogenized coordinates; throws NonAffinePoint for points at infinity.
  Eigen::Matrix<double, N - 1, 1> affine() const {
    if (coords_[N - 1] == 0.0) {
      throw Error(Errc::NonAffinePoint, "point at infinity has no affine chart");
    }
    return coords_.template head<N - 1>() / coords_[N - 1];
  }

 private:
  Coords coords_;
};

using HomPoint2 = HomPoint<3>;
using HomPoint3 = HomPoint<4>;

template <int N>
bool equal(const HomPoint<N>& a, const HomPoint<N>& b, double tol = kDefaultTol) {
  return (a.canonical() - b.canonical()).norm() <= tol;
}

class Camera {
 public:
  explicit Camera(const Matrix34& matrix) : matrix_(matrix) {}
  const Matrix34& matrix() const noexcept { return matrix_; }

 private:
  Matrix34 matrix_;
};

// A 3x3 matrix up to scale, stored with unit Frobenius norm and first nonzero
// row-major entry positive. Rank 2 is a queryable property, not an invariant.
class FMatrix {
 public:
  explicit FMatrix(const Eigen::Matrix3d& m);

  static FMatrix from_rowmajor(const Vector9& v);

  const Eigen::Matrix3d& matrix() const noexcept { return m_; }
  Vector9 vec() const;  // row-major

  // |det| of the unit-norm representative is at most tol.
  bool is_valid(double tol = kDefaultTol) const;

 private:
  Eigen::Matrix3d m_;
};

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

HomPoint2 project(const Camera& camera, const HomPoint3& p);

HomPoint3 focal_point(const Camera& camera, double tol = kDefaultTol);

// Sum over correspondences of (y^T F x)^2 with F at unit Frobenius norm and
// each image point at unit Euclidean norm.
double epipolar_residual(const FMatrix& F, std::span<const HomPoint2> X,
                         std::span<const HomPoint2> Y);

// Angle between the lines spanned by vec(F1) and vec(F2), in [0, pi/2].
double grassmann_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double grassmann_angle(const Eigen::Matrix3d& F1, const Eigen::Matrix3d& F2);
double grassmann_angle(const FMatrix& F1, const FMatrix& F2);

}  // namespace cubefm
