#include "cubefm/estimators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "cubefm/degeneracy.hpp"

namespace cubefm {

namespace {

constexpr double kImagTol = 1e-8;
constexpr double kRootMergeTol = 1e-8;
constexpr double kClusterTol = 1e-4;
// Interpolated coefficients carry a few ulps of error of their own.
constexpr double kMultipleRootTol = 1024.0 * std::numeric_limits<double>::epsilon();
constexpr double kResidualTieTol = 1e-14;

Eigen::Matrix3d reshape_rowmajor(const Eigen::VectorXd& v) {
  Eigen::Matrix3d m;
  m << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
  return m;
}

double horner(std::span<const double> c, double x) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

double horner_derivative(std::span<const double> c, double x) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * c[i];
  return acc;
}

// sum |c_i| |x|^i, the scale of rounding errors in horner(c, x).
double magnitude(std::span<const double> c, double x) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * std::abs(x) + std::abs(c[i]);
  return acc;
}

std::vector<double> derivative(std::vector<double> c, std::size_t order) {
  for (std::size_t k = 0; k < order && c.size() > 1; ++k) {
    for (std::size_t i = 1; i < c.size(); ++i) c[i - 1] = static_cast<double>(i) * c[i];
    c.pop_back();
  }
  return c;
}

// A few Newton steps, each kept only when it does not increase |p|.
double newton_polish(std::span<const double> c, double r) {
  for (int it = 0; it < 3; ++it) {
    const double p = horner(c, r);
    const double dp = horner_derivative(c, r);
    if (p == 0.0 || dp == 0.0) break;
    const double next = r - p / dp;
    if (!(std::abs(horner(c, next)) <= std::abs(p))) break;
    r = next;
  }
  return r;
}

// Conditions pts in place and records the transform. Clouds containing
// ideal points have no affine centroid and are left as they are.
void condition(std::vector<HomPoint2>& pts, Eigen::Matrix3d& T) {
  for (const auto& p : pts) {
    if (!p.is_affine()) return;
  }
  auto [t, out] = hartley_normalize(pts);
  T = t.T;
  pts = std::move(out);
}

}  // namespace

std::pair<NormalizationTransform, std::vector<HomPoint2>> hartley_normalize(
    std::span<const HomPoint2> pts) {
  if (pts.empty()) throw Error(Errc::DegenerateCloud, "empty point cloud");
  std::vector<Eigen::Vector2d> affine;
  affine.reserve(pts.size());
  for (const auto& p : pts) {
    if (!p.is_affine()) throw Error(Errc::NonAffinePoint, "cannot normalize a point at infinity");
    affine.push_back(p.affine());
  }
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& a : affine) centroid += a;
  centroid /= static_cast<double>(affine.size());
  double sq = 0.0;
  for (const auto& a : affine) sq += (a - centroid).squaredNorm();
  const double rms = std::sqrt(sq / static_cast<double>(affine.size()));
  if (!(rms > kDefaultTol * (1.0 + centroid.norm()))) {
    throw Error(Errc::DegenerateCloud, "all points coincide");
  }
  const double s = std::sqrt(2.0) / rms;
  NormalizationTransform t;
  t.T << s, 0.0, -s * centroid.x(), 0.0, s, -s * centroid.y(), 0.0, 0.0, 1.0;

  std::vector<HomPoint2> out;
  out.reserve(affine.size());
  for (const auto& a : affine) {
    const Eigen::Vector2d q = s * (a - centroid);
    out.emplace_back(q.x(), q.y(), 1.0);
  }
  return {t, std::move(out)};
}

FMatrix eight_point(std::span<const HomPoint2> X, std::span<const HomPoint2> Y, double rank_tol) {
  if (X.size() != Y.size()) throw Error(Errc::LengthMismatch, "X and Y differ in length");
  if (X.size() < 8) throw Error(Errc::InsufficientPoints, "8-point algorithm needs at least 8 correspondences");
  const auto kernel = kernel_basis(build_Z(X, Y), rank_tol);
  if (kernel.size() != 1) {
    throw Error(Errc::DegenerateInput,
                "kernel of Z has dimension " + std::to_string(kernel.size()) + ", expected 1",
                static_cast<int>(kernel.size()));
  }
  return FMatrix(reshape_rowmajor(kernel.front()));
}

FMatrix fundamental_from_cameras(const Camera& A1, const Camera& A2) {
  const HomPoint3 c1 = focal_point(A1);
  const HomPoint3 c2 = focal_point(A2);
  if (equal(c1, c2)) throw Error(Errc::CoincidentCenters, "cameras share a focal point");
  const Eigen::Vector3d e2 = A2.matrix() * c1.coords();
  if (!(e2.norm() > 0.0)) throw Error(Errc::CoincidentCenters, "epipole vanishes");
  const Matrix34& a1 = A1.matrix();
  const Eigen::Matrix<double, 4, 3> pinv = a1.transpose() * (a1 * a1.transpose()).inverse();
  return FMatrix(skew(e2) * A2.matrix() * pinv);
}

std::array<double, 4> pencil_cubic(const Eigen::Matrix3d& F1, const Eigen::Matrix3d& F2) {
  auto d = [&](double a) { return (a * F1 + (1.0 - a) * F2).determinant(); };
  const double dm1 = d(-1.0), d0 = d(0.0), d1 = d(1.0), d2 = d(2.0);
  return {d0, (-2.0 * dm1 - 3.0 * d0 + 6.0 * d1 - d2) / 6.0, (dm1 - 2.0 * d0 + d1) / 2.0,
          (-dm1 + 3.0 * d0 - 3.0 * d1 + d2) / 6.0};
}

std::vector<double> real_roots(std::span<const double> coeffs, double degree_tol) {
  double largest = 0.0;
  for (double c : coeffs) largest = std::max(largest, std::abs(c));
  if (!(largest > 0.0)) return {};
  std::size_t degree = coeffs.size() - 1;
  while (degree > 0 && std::abs(coeffs[degree]) <= degree_tol * largest) --degree;
  if (degree == 0) return {};
  const auto c = coeffs.first(degree + 1);

  std::vector<std::complex<double>> eig;
  if (degree == 1) {
    eig.emplace_back(-c[0] / c[1], 0.0);
  } else {
    const auto n = static_cast<Eigen::Index>(degree);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[degree];
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    for (const auto& z : es.eigenvalues()) eig.push_back(z);
  }

  // A root of multiplicity m splits into m eigenvalues spread by about
  // eps^(1/m). Their mean is accurate to O(eps) and is a simple root of the
  // (m-1)-th derivative, so clusters are merged when p verifiably vanishes
  // at the polished mean.
  std::vector<double> roots;
  std::vector<bool> used(eig.size(), false);
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> cluster{i};
    for (std::size_t j = i + 1; j < eig.size(); ++j) {
      if (!used[j] && std::abs(eig[j] - eig[i]) <= kClusterTol * (1.0 + std::abs(eig[i]))) {
        cluster.push_back(j);
      }
    }
    if (cluster.size() >= 2) {
      std::complex<double> mean = 0.0;
      for (std::size_t k : cluster) mean += eig[k];
      mean /= static_cast<double>(cluster.size());
      if (std::abs(mean.imag()) <= kImagTol * (1.0 + std::abs(mean.real()))) {
        auto d = derivative(std::vector<double>(c.begin(), c.end()), cluster.size() - 1);
        const double x = newton_polish(d, mean.real());
        if (std::abs(horner(c, x)) <= kMultipleRootTol * magnitude(c, x)) {
          roots.push_back(x);
          for (std::size_t k : cluster) used[k] = true;
          continue;
        }
      }
    }
    used[i] = true;
    if (std::abs(eig[i].imag()) <= kImagTol * (1.0 + std::abs(eig[i].real()))) {
      roots.push_back(newton_polish(c, eig[i].real()));
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || std::abs(r - unique.back()) > kRootMergeTol) unique.push_back(r);
  }
  return unique;
}

PencilSolution pencil_solve(const Eigen::Matrix3d& F1, const Eigen::Matrix3d& F2) {
  const double n1 = F1.norm(), n2 = F2.norm();
  if (!(n1 > 0.0) || !(n2 > 0.0) || grassmann_angle(F1, F2) <= kDefaultTol) {
    throw Error(Errc::DependentInputs, "pencil generators are linearly dependent");
  }
  const auto coeffs = pencil_cubic(F1, F2);
  const double scale = std::pow(std::max(n1, n2), 3);
  if (std::all_of(coeffs.begin(), coeffs.end(),
                  [&](double c) { return std::abs(c) <= kDefaultTol * scale; })) {
    throw Error(Errc::IdenticallyZeroPencil, "every member of the pencil is singular");
  }

  PencilSolution sol;
  for (double a : real_roots(coeffs)) {
    sol.roots.push_back(a);
    sol.candidates.emplace_back(a * F1 + (1.0 - a) * F2);
  }
  if (sol.roots.empty()) {
    // Only the member at infinity, F1 - F2, is singular.
    sol.roots.push_back(std::numeric_limits<double>::infinity());
    sol.candidates.emplace_back(F1 - F2);
  }
  return sol;
}

PencilSolution seven_point(std::span<const HomPoint2> X, std::span<const HomPoint2> Y,
                           bool normalize, double rank_tol) {
  if (X.size() != Y.size()) throw Error(Errc::LengthMismatch, "X and Y differ in length");
  if (X.size() != 7) throw Error(Errc::InsufficientPoints, "7-point algorithm needs exactly 7 correspondences");

  Eigen::Matrix3d tx = Eigen::Matrix3d::Identity(), ty = Eigen::Matrix3d::Identity();
  std::vector<HomPoint2> xs(X.begin(), X.end()), ys(Y.begin(), Y.end());
  if (normalize) {
    condition(xs, tx);
    condition(ys, ty);
  }
  const auto kernel = kernel_basis(build_Z(xs, ys), rank_tol);
  if (kernel.size() != 2) {
    throw Error(Errc::DegenerateInput,
                "kernel of Z has dimension " + std::to_string(kernel.size()) + ", expected 2",
                static_cast<int>(kernel.size()));
  }
  PencilSolution sol = pencil_solve(reshape_rowmajor(kernel[0]), reshape_rowmajor(kernel[1]));
  if (normalize) {
    for (auto& f : sol.candidates) f = FMatrix(ty.transpose() * f.matrix() * tx);
  }
  return sol;
}

RankTruncation truncate_rank(const Eigen::MatrixXd& M, int rank) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RankTruncation out;
  out.singular_values = svd.singularValues();
  out.V = svd.matrixV();
  const Eigen::Index k = std::min<Eigen::Index>(rank, out.singular_values.size());
  // Subtracting the discarded terms keeps M - truncated accurate to working
  // precision relative to the dropped singular values, which matters when
  // they are tiny next to sigma_1.
  const Eigen::Index d = out.singular_values.size() - k;
  out.truncated = M - svd.matrixU().middleCols(k, d) * out.singular_values.tail(d).asDiagonal() *
                          out.V.middleCols(k, d).transpose();
  out.discarded_norm = out.singular_values.tail(out.singular_values.size() - k).norm();
  return out;
}

CubeEightPointReport cube_eight_point_report(std::span<const HomPoint2> X,
                                             std::span<const HomPoint2> Y, bool normalize) {
  if (X.size() != Y.size()) throw Error(Errc::LengthMismatch, "X and Y differ in length");
  if (X.size() != 8) throw Error(Errc::InsufficientPoints, "Cube-8-point needs exactly 8 correspondences");

  Eigen::Matrix3d tx = Eigen::Matrix3d::Identity(), ty = Eigen::Matrix3d::Identity();
  std::vector<HomPoint2> xs(X.begin(), X.end()), ys(Y.begin(), Y.end());
  if (normalize) {
    condition(xs, tx);
    condition(ys, ty);
  }

  // Z' keeps the seven leading singular values; its kernel is spanned by the
  // last two right singular vectors of Z.
  RankTruncation trunc = truncate_rank(build_Z(xs, ys), 7);
  const Eigen::Matrix3d g1 = reshape_rowmajor(trunc.V.col(7));
  const Eigen::Matrix3d g2 = reshape_rowmajor(trunc.V.col(8));
  PencilSolution pencil = pencil_solve(g1, g2);

  std::vector<FMatrix> candidates;
  std::vector<double> residuals;
  std::size_t best = 0;
  for (std::size_t i = 0; i < pencil.candidates.size(); ++i) {
    candidates.emplace_back(ty.transpose() * pencil.candidates[i].matrix() * tx);
    residuals.push_back(epipolar_residual(candidates.back(), X, Y));
    if (residuals[i] < residuals[best] - kResidualTieTol) best = i;
  }
  FMatrix chosen = candidates[best];
  return CubeEightPointReport{chosen, std::move(pencil), std::move(candidates),
                              std::move(residuals), best, std::move(trunc)};
}

FMatrix cube_eight_point(std::span<const HomPoint2> X, std::span<const HomPoint2> Y,
                         bool normalize) {
  return cube_eight_point_report(X, Y, normalize).F;
}

}  // namespace cubefm
