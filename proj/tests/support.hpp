#pragma once

// Shared fixtures and independent reference computations for the tests.
// Nothing here calls into the library routine it is used to check.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <optional>
#include <random>
#include <vector>

#include "cubefm/core.hpp"
#include "cubefm/degeneracy.hpp"
#include "cubefm/harness.hpp"

namespace support {

using cubefm::Camera;
using cubefm::HomPoint2;
using cubefm::HomPoint3;

// Two translated identity cameras and the (+-1,+-1,+-1) cube, with the image
// coordinates printed alongside the integer constraint matrix they produce.
inline Camera fixture_camera(int which) {
  cubefm::Matrix34 A;
  A << 1, 0, 0, 2,
       0, 1, 0, 3,
       0, 0, 1, which == 1 ? 2 : 1;
  return Camera(A);
}

inline std::vector<HomPoint2> fixture_X() {
  const int c[8][3] = {{1, 2, 1}, {3, 2, 1}, {1, 4, 1}, {3, 4, 1},
                       {1, 2, 3}, {3, 2, 3}, {1, 4, 3}, {3, 4, 3}};
  std::vector<HomPoint2> out;
  for (const auto& r : c) out.emplace_back(r[0], r[1], r[2]);
  return out;
}

inline std::vector<HomPoint2> fixture_Y() {
  const int c[8][3] = {{1, 2, 0}, {3, 2, 0}, {1, 4, 0}, {3, 4, 0},
                       {1, 2, 2}, {3, 2, 2}, {1, 4, 2}, {3, 4, 2}};
  std::vector<HomPoint2> out;
  for (const auto& r : c) out.emplace_back(r[0], r[1], r[2]);
  return out;
}

inline Eigen::Matrix<double, 8, 9> fixture_Z() {
  Eigen::Matrix<double, 8, 9> Z;
  Z << 1, 2, 1, 2, 4, 2, 0, 0, 0,
       9, 6, 3, 6, 4, 2, 0, 0, 0,
       1, 4, 1, 4, 16, 4, 0, 0, 0,
       9, 12, 3, 12, 16, 4, 0, 0, 0,
       1, 2, 3, 2, 4, 6, 2, 4, 6,
       9, 6, 9, 6, 4, 6, 6, 4, 6,
       1, 4, 3, 4, 16, 12, 2, 8, 6,
       9, 12, 9, 12, 16, 12, 6, 8, 6;
  return Z;
}

inline Eigen::Matrix3d fixture_F() {
  Eigen::Matrix3d F;
  F << 0, 1, 0, -1, 0, 0, 0, 0, 0;
  return F;
}

// Fundamental matrix from the bilinear determinant formula:
// F(j, i) = (-1)^(i+j) det[A1 without row i; A2 without row j].
inline Eigen::Matrix3d oracle_fundamental(const Camera& c1, const Camera& c2) {
  const auto& A = c1.matrix();
  const auto& B = c2.matrix();
  Eigen::Matrix3d F;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Eigen::Matrix4d M;
      int r = 0;
      for (int k = 0; k < 3; ++k)
        if (k != i) M.row(r++) = A.row(k);
      for (int k = 0; k < 3; ++k)
        if (k != j) M.row(r++) = B.row(k);
      F(j, i) = ((i + j) % 2 ? -1.0 : 1.0) * M.determinant();
    }
  }
  return F;
}

// Plain-loop constraint row: entry 3r + c is y_r * x_c.
inline Eigen::MatrixXd oracle_Z(const std::vector<HomPoint2>& X, const std::vector<HomPoint2>& Y) {
  Eigen::MatrixXd Z(X.size(), 9);
  for (std::size_t i = 0; i < X.size(); ++i)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) Z(i, 3 * r + c) = Y[i][r] * X[i][c];
  return Z;
}

// Degree-two monomials of (x0..x3) in lexicographic order.
inline Eigen::Matrix<double, 10, 1> oracle_veronese(const Eigen::Vector4d& p) {
  Eigen::Matrix<double, 10, 1> v;
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) v[k++] = p[i] * p[j];
  return v;
}

inline Eigen::Vector4d random_point(std::mt19937_64& rng, double half = 1.0) {
  std::uniform_real_distribution<double> u(-half, half);
  return {u(rng), u(rng), u(rng), 1.0};
}

// Random camera pair plus a noise-free projection of the world points.
struct Views {
  Camera A1, A2;
  std::vector<HomPoint2> X, Y;
};

inline Views project_all(const std::vector<Eigen::Vector4d>& P, std::mt19937_64& rng,
                         double radius = 6.0) {
  auto [A1, A2] = cubefm::sample_camera_pair(rng, radius);
  Views v{A1, A2, {}, {}};
  for (const auto& p : P) {
    v.X.push_back(cubefm::project(A1, HomPoint3(p)));
    v.Y.push_back(cubefm::project(A2, HomPoint3(p)));
  }
  return v;
}

inline std::vector<Eigen::Vector4d> octet_points(const cubefm::CubeConfig& C) {
  return {C.vertices().begin(), C.vertices().end()};
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace support

namespace support {

// Error code thrown by f, or nullopt if it returns normally.
template <typename F>
std::optional<cubefm::Errc> error_of(F&& f) {
  try {
    f();
  } catch (const cubefm::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace support
