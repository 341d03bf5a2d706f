#include "cubefm/core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cubefm/simd/kernels.hpp"

namespace cubefm {

FMatrix::FMatrix(const Eigen::Matrix3d& m) {
  const double norm = m.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(Errc::ZeroMatrix, "fundamental matrix must be nonzero and finite");
  }
  m_ = m / norm;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (m_(r, c) != 0.0) {
        if (m_(r, c) < 0.0) m_ = -m_;
        return;
      }
    }
  }
}

FMatrix FMatrix::from_rowmajor(const Vector9& v) {
  Eigen::Matrix3d m;
  m << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
  return FMatrix(m);
}

Vector9 FMatrix::vec() const {
  Vector9 v;
  v << m_(0, 0), m_(0, 1), m_(0, 2), m_(1, 0), m_(1, 1), m_(1, 2), m_(2, 0), m_(2, 1), m_(2, 2);
  return v;
}

bool FMatrix::is_valid(double tol) const { return std::abs(m_.determinant()) <= tol; }

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

HomPoint2 project(const Camera& camera, const HomPoint3& p) {
  const Eigen::Vector3d image = camera.matrix() * p.coords();
  if (image.norm() <= kDefaultTol * camera.matrix().norm() * p.coords().norm()) {
    throw Error(Errc::FocalPointProjection, "point coincides with the camera focal point");
  }
  return HomPoint2(image);
}

HomPoint3 focal_point(const Camera& camera, double tol) {
  const Matrix34& a = camera.matrix();
  Eigen::JacobiSVD<Matrix34> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s[0] > 0.0) || s[2] <= tol * s[0]) {
    throw Error(Errc::RankDeficientCamera, "camera matrix has rank below 3");
  }
  const Eigen::Matrix3d m = a.leftCols<3>();
  Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  lu.setThreshold(tol);
  if (lu.isInvertible()) {
    Eigen::Vector4d c;
    c << -lu.solve(Eigen::Vector3d(a.col(3))), 1.0;
    return HomPoint3(c);
  }
  // Focal point at infinity.
  return HomPoint3(Eigen::Vector4d(svd.matrixV().col(3)));
}

double epipolar_residual(const FMatrix& F, std::span<const HomPoint2> X,
                         std::span<const HomPoint2> Y) {
  if (X.size() != Y.size()) {
    throw Error(Errc::LengthMismatch, "X and Y must have the same number of points");
  }
  if (X.empty()) throw Error(Errc::InvalidArgument, "residual needs at least one correspondence");
  const std::size_t n = X.size();
  std::vector<double> buf(6 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) {
      buf[k * n + i] = X[i][k];
      buf[(3 + k) * n + i] = Y[i][k];
    }
  }
  const double* x[3] = {buf.data(), buf.data() + n, buf.data() + 2 * n};
  const double* y[3] = {buf.data() + 3 * n, buf.data() + 4 * n, buf.data() + 5 * n};
  Eigen::Matrix<double, 3, 3, Eigen::RowMajor> f = F.matrix();
  return simd::kernels().epipolar_sq_sum(f.data(), x, y, n);
}

double grassmann_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw Error(Errc::LengthMismatch, "vectors differ in length");
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw Error(Errc::ZeroMatrix, "angle to the zero matrix");
  const Eigen::VectorXd ua = a / na;
  Eigen::VectorXd ub = b / nb;
  if (ua.dot(ub) < 0.0) ub = -ub;
  // Half-chord form stays accurate for tiny angles where acos would not.
  return 2.0 * std::asin(std::min(1.0, 0.5 * (ua - ub).norm()));
}

double grassmann_angle(const Eigen::Matrix3d& F1, const Eigen::Matrix3d& F2) {
  return grassmann_angle(Eigen::VectorXd(F1.reshaped<Eigen::RowMajor>()),
                         Eigen::VectorXd(F2.reshaped<Eigen::RowMajor>()));
}

double grassmann_angle(const FMatrix& F1, const FMatrix& F2) {
  return grassmann_angle(F1.matrix(), F2.matrix());
}

}  // namespace cubefm
