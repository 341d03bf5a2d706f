#include "cubefm/degeneracy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cubefm/simd/kernels.hpp"

namespace cubefm {

Veronese veronese24(const HomPoint3& p) {
  const auto& x = p.coords();
  Veronese v;
  v << x[0] * x[0], x[0] * x[1], x[0] * x[2], x[0] * x[3], x[1] * x[1], x[1] * x[2],
      x[1] * x[3], x[2] * x[2], x[2] * x[3], x[3] * x[3];
  return v;
}

Eigen::MatrixXd veronese_matrix(std::span<const HomPoint3> P) {
  const std::size_t n = P.size();
  // Column-major n x 4 doubles as four coordinate arrays.
  Eigen::MatrixXd coords(n, 4);
  for (std::size_t i = 0; i < n; ++i) coords.row(static_cast<Eigen::Index>(i)) = P[i].coords();
  Eigen::MatrixXd out(n, 10);
  const double* p[4] = {coords.col(0).data(), coords.col(1).data(), coords.col(2).data(),
                        coords.col(3).data()};
  simd::kernels().veronese_rows(p, n, out.data());
  return out;
}

Eigen::MatrixXd build_Z(std::span<const HomPoint2> X, std::span<const HomPoint2> Y) {
  if (X.size() != Y.size()) {
    throw Error(Errc::LengthMismatch, "X and Y must have the same number of points");
  }
  const std::size_t n = X.size();
  Eigen::MatrixXd xs(n, 3), ys(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    xs.row(static_cast<Eigen::Index>(i)) = X[i].coords();
    ys.row(static_cast<Eigen::Index>(i)) = Y[i].coords();
  }
  Eigen::MatrixXd out(n, 9);
  const double* x[3] = {xs.col(0).data(), xs.col(1).data(), xs.col(2).data()};
  const double* y[3] = {ys.col(0).data(), ys.col(1).data(), ys.col(2).data()};
  simd::kernels().kron_rows(x, y, n, out.data());
  return out;
}

namespace {

int rank_from_singular_values(const Eigen::VectorXd& s, double rank_tol) {
  if (s.size() == 0 || !(s[0] > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rank_tol * s[0]) ++rank;
  }
  return rank;
}

}  // namespace

std::vector<Eigen::VectorXd> kernel_basis(const Eigen::MatrixXd& M, double rank_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const int rank = rank_from_singular_values(svd.singularValues(), rank_tol);
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index j = rank; j < M.cols(); ++j) basis.emplace_back(svd.matrixV().col(j));
  return basis;
}

int numerical_rank(const Eigen::MatrixXd& M, double rank_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return rank_from_singular_values(svd.singularValues(), rank_tol);
}

double bracket(const Eigen::Vector4d& a, const Eigen::Vector4d& b, const Eigen::Vector4d& c,
               const Eigen::Vector4d& d) {
  Eigen::Matrix4d m;
  m.row(0) = a;
  m.row(1) = b;
  m.row(2) = c;
  m.row(3) = d;
  return m.determinant();
}

int cube_slot(int label) {
  switch (label) {
    case 0: return 0;
    case 1: return 1;
    case 2: return 2;
    case 3: return 3;
    case 6: return 4;
    case 7: return 5;
    case 8: return 6;
    case 9: return 7;
    default: throw Error(Errc::InvalidArgument, "not a cube vertex label: " + std::to_string(label));
  }
}

CubeCheck is_combinatorial_cube(const Octet& vertices, double tol) {
  CubeCheck check;
  Octet v;
  for (int i = 0; i < 8; ++i) {
    const double w = vertices[i][3];
    if (!(std::abs(w) > tol * vertices[i].norm())) {
      check.diagnostic = "vertex " + std::to_string(kCubeLabels[i]) + " is not affine";
      return check;
    }
    v[i] = vertices[i] / w;
  }

  Eigen::Vector3d lo = v[0].head<3>(), hi = v[0].head<3>();
  for (const auto& p : v) {
    lo = lo.cwiseMin(p.head<3>());
    hi = hi.cwiseMax(p.head<3>());
  }
  const double diameter = (hi - lo).norm();
  if (!(diameter > 0.0)) {
    check.diagnostic = "all vertices coincide";
    return check;
  }

  check.min_side_margin = std::numeric_limits<double>::infinity();
  for (const auto& facet : kCubeFacets) {
    const auto& a = v[cube_slot(facet[0])];
    const auto& b = v[cube_slot(facet[1])];
    const auto& c = v[cube_slot(facet[2])];
    const auto& d = v[cube_slot(facet[3])];
    const double scale = a.norm() * b.norm() * c.norm() * d.norm();
    const double residual = std::abs(bracket(a, b, c, d)) / scale;
    check.max_facet_residual = std::max(check.max_facet_residual, residual);

    Eigen::Matrix4d stack;
    stack << a.transpose(), b.transpose(), c.transpose(), d.transpose();
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(stack, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s[2] <= tol * s[0]) {
      check.diagnostic = "facet vertices are collinear";
      check.min_side_margin = 0.0;
      return check;
    }
    Eigen::Vector4d plane = svd.matrixV().col(3);
    plane /= plane.head<3>().norm();

    int sign = 0;
    for (int label : kCubeLabels) {
      if (std::find(facet.begin(), facet.end(), label) != facet.end()) continue;
      const double side = plane.dot(v[cube_slot(label)]) / diameter;
      check.min_side_margin = std::min(check.min_side_margin, std::abs(side));
      const int s_here = side > 0.0 ? 1 : -1;
      if (sign == 0) sign = s_here;
      if ((std::abs(side) <= tol || s_here != sign) && check.diagnostic.empty()) {
        check.diagnostic = "vertex " + std::to_string(label) +
                           " is not strictly on one side of a facet plane";
      }
    }
  }
  if (check.max_facet_residual > tol) {
    check.diagnostic = "facet vertices are not coplanar (scaled determinant " +
                       std::to_string(check.max_facet_residual) + ")";
    return check;
  }
  if (!check.diagnostic.empty()) return check;
  check.is_cube = true;
  check.diagnostic = "ok";
  return check;
}

CubeConfig CubeConfig::validated(const Octet& vertices, double tol) {
  const CubeCheck check = is_combinatorial_cube(vertices, tol);
  if (!check.is_cube) throw Error(Errc::InvalidArgument, "not a combinatorial cube: " + check.diagnostic);
  return CubeConfig(vertices);
}

CubeConfig CubeConfig::unit() {
  // Normal-form 0/1 coordinates per label, mapped to +-1.
  static constexpr int kBits[8][3] = {{0, 0, 0}, {1, 1, 0}, {0, 1, 0}, {1, 0, 0},
                                      {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {0, 0, 1}};
  Octet v;
  for (int i = 0; i < 8; ++i) {
    v[i] << 2.0 * kBits[i][0] - 1.0, 2.0 * kBits[i][1] - 1.0, 2.0 * kBits[i][2] - 1.0, 1.0;
  }
  return CubeConfig(v);
}

std::vector<HomPoint3> CubeConfig::points() const {
  std::vector<HomPoint3> out;
  out.reserve(8);
  for (const auto& p : v_) out.emplace_back(p);
  return out;
}

ConfigTen ConfigTen::from_cube(const Octet& cube, const Eigen::Vector4d& f1,
                               const Eigen::Vector4d& f2) {
  ConfigTen c;
  for (int i = 0; i < 8; ++i) c.points[kCubeLabels[i]] = cube[i];
  c.points[4] = f1;
  c.points[5] = f2;
  return c;
}

namespace {

struct Monomial {
  int sign;
  std::array<std::array<int, 4>, 5> brackets;
};

constexpr std::array<Monomial, 4> kReducedInvariant{{
    {+1, {{{0, 1, 3, 5}, {0, 2, 4, 7}, {1, 2, 6, 8}, {3, 4, 6, 9}, {5, 7, 8, 9}}}},
    {-1, {{{0, 1, 3, 4}, {0, 2, 5, 7}, {1, 2, 6, 8}, {3, 5, 6, 9}, {4, 7, 8, 9}}}},
    {+1, {{{0, 1, 2, 5}, {0, 3, 4, 6}, {1, 3, 7, 8}, {2, 4, 7, 9}, {5, 6, 8, 9}}}},
    {-1, {{{0, 1, 2, 4}, {0, 3, 5, 6}, {1, 3, 7, 8}, {2, 5, 7, 9}, {4, 6, 8, 9}}}},
}};

// Vector orthogonal to a, b, c with v . x = det[x; a; b; c].
Eigen::Vector4d cross4(const Eigen::Vector4d& a, const Eigen::Vector4d& b,
                       const Eigen::Vector4d& c) {
  Eigen::Matrix<double, 3, 4> m;
  m << a.transpose(), b.transpose(), c.transpose();
  Eigen::Vector4d v;
  for (int i = 0; i < 4; ++i) {
    Eigen::Matrix3d minor;
    int col = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      minor.col(col++) = m.col(j);
    }
    v[i] = ((i % 2 == 0) ? 1.0 : -1.0) * minor.determinant();
  }
  return v;
}

Eigen::Vector4d affine4(const Eigen::Vector3d& p) { return {p.x(), p.y(), p.z(), 1.0}; }

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::Matrix3d g;
  for (int i = 0; i < 9; ++i) g(i / 3, i % 3) = normal(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace

double turnbull_young_reduced(const ConfigTen& c) {
  double sum = 0.0;
  for (const auto& m : kReducedInvariant) {
    double term = m.sign;
    for (const auto& b : m.brackets) {
      term *= bracket(c.points[b[0]], c.points[b[1]], c.points[b[2]], c.points[b[3]]);
    }
    sum += term;
  }
  return sum;
}

std::optional<Eigen::Vector3d> close_vertex8(const CubeParams& params, double tol) {
  const Eigen::Vector4d p1 = affine4(params.v1), p6 = affine4(params.v6), p7 = affine4(params.v7);
  const Eigen::Vector4d p2(0, 1, 0, 1), p3(1, 0, 0, 1), p9(0, 0, 1, 1);
  Eigen::Matrix<double, 3, 4> planes;
  planes.row(0) = cross4(p1, p2, p7).transpose();
  planes.row(1) = cross4(p1, p3, p6).transpose();
  planes.row(2) = cross4(p6, p7, p9).transpose();
  for (int r = 0; r < 3; ++r) {
    const double n = planes.row(r).norm();
    if (!(n > 0.0)) return std::nullopt;
    planes.row(r) /= n;
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(planes);
  if (svd.singularValues()[2] <= tol * svd.singularValues()[0]) return std::nullopt;
  const Eigen::Vector4d x = cross4(planes.row(0), planes.row(1), planes.row(2));
  if (std::abs(x[3]) <= tol * x.norm()) return std::nullopt;
  return Eigen::Vector3d(x.head<3>() / x[3]);
}

std::optional<Octet> cube_from_params(const CubeParams& params) {
  const auto v8 = close_vertex8(params);
  if (!v8) return std::nullopt;
  return Octet{affine4({0, 0, 0}), affine4(params.v1), affine4({0, 1, 0}), affine4({1, 0, 0}),
               affine4(params.v6), affine4(params.v7), affine4(*v8),     affine4({0, 0, 1})};
}

SampledCube sample_combinatorial_cube(std::mt19937_64& rng, double spread,
                                      const CubeSamplingOptions& options) {
  if (!(spread > 0.0)) throw Error(Errc::InvalidArgument, "spread must be positive");
  std::uniform_real_distribution<double> coord(0.0, spread);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto positive = [&] {
    double x = 0.0;
    while (x == 0.0) x = coord(rng);
    return x;
  };

  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    CubeParams params;
    params.v1 = {positive(), positive(), 0.0};
    params.v6 = {positive(), 0.0, positive()};
    params.v7 = {0.0, positive(), positive()};
    const auto normal_form = cube_from_params(params);
    if (!normal_form) continue;

    // Random rotation and anisotropic scaling, then fit into [-1,1]^3.
    Eigen::Matrix3d linear = random_rotation(rng) *
                             Eigen::Vector3d(0.5 + unit(rng), 0.5 + unit(rng), 0.5 + unit(rng)).asDiagonal() *
                             random_rotation(rng);
    Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector3d hi = -lo;
    for (const auto& p : *normal_form) {
      const Eigen::Vector3d q = linear * p.head<3>();
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
    const double half_extent = 0.5 * (hi - lo).maxCoeff();
    const double scale = (0.5 + 0.5 * unit(rng)) / half_extent;
    const Eigen::Vector3d center = 0.5 * (lo + hi) * scale;
    Eigen::Vector3d offset;
    for (int k = 0; k < 3; ++k) {
      const double slack = 1.0 - 0.5 * (hi[k] - lo[k]) * scale;
      offset[k] = -center[k] + slack * (2.0 * unit(rng) - 1.0);
    }
    Eigen::Matrix4d affine = Eigen::Matrix4d::Identity();
    affine.topLeftCorner<3, 3>() = scale * linear;
    affine.topRightCorner<3, 1>() = offset;

    Octet mapped;
    for (int i = 0; i < 8; ++i) mapped[i] = affine * (*normal_form)[i];
    if (!is_combinatorial_cube(mapped, options.tol).is_cube) continue;
    return SampledCube{CubeConfig::validated(mapped, options.tol), params, affine};
  }
  throw Error(Errc::ExhaustedRetries, "no combinatorial cube after " +
                                          std::to_string(options.max_retries) + " attempts");
}

CubeConfig random_combinatorial_cube(std::mt19937_64& rng, double spread,
                                     const CubeSamplingOptions& options) {
  return sample_combinatorial_cube(rng, spread, options).cube;
}

}  // namespace cubefm
