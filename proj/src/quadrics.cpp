#include "cubefm/quadrics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "cubefm/simd/kernels.hpp"

namespace cubefm {

SymQuadric::SymQuadric(const Eigen::Matrix4d& q) {
  const Eigen::Matrix4d sym = 0.5 * (q + q.transpose());
  const double norm = sym.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw Error(Errc::ZeroMatrix, "quadric must be nonzero");
  q_ = sym / norm;
  for (int i = 0; i < 16; ++i) {
    const double x = q_(i / 4, i % 4);
    if (x != 0.0) {
      if (x < 0.0) q_ = -q_;
      break;
    }
  }
}

SymQuadric SymQuadric::from_coefficients(const Veronese& c) {
  Eigen::Matrix4d q;
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j, ++k) {
      if (i == j) {
        q(i, i) = c[k];
      } else {
        q(i, j) = q(j, i) = 0.5 * c[k];
      }
    }
  }
  return SymQuadric(q);
}

bool equal_up_to_scale(const SymQuadric& a, const SymQuadric& b, double tol) {
  return grassmann_angle(Eigen::VectorXd(a.matrix().reshaped()),
                         Eigen::VectorXd(b.matrix().reshaped())) <= tol;
}

const char* to_string(QuadricTag tag) noexcept {
  switch (tag) {
    case QuadricTag::RuledNondegenerate: return "RULED_NONDEGENERATE";
    case QuadricTag::NonruledNondegenerate: return "NONRULED_NONDEGENERATE";
    case QuadricTag::Empty: return "EMPTY";
    case QuadricTag::Degenerate: return "DEGENERATE";
  }
  return "UNKNOWN";
}

QuadricClass classify(const Eigen::Matrix4d& Q, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (Q + Q.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const Eigen::Vector4d lambda = es.eigenvalues();
  const double largest = lambda.cwiseAbs().maxCoeff();
  QuadricClass cls;
  if (!(largest > 0.0)) return cls;
  cls.n_zero = 0;
  for (double l : lambda) {
    if (std::abs(l) <= zero_tol * largest) {
      ++cls.n_zero;
    } else if (l > 0.0) {
      ++cls.n_plus;
    } else {
      ++cls.n_minus;
    }
  }
  if (cls.n_minus > cls.n_plus) std::swap(cls.n_minus, cls.n_plus);
  cls.margin = cls.n_zero > 0 ? 0.0 : lambda.cwiseAbs().minCoeff() / largest;
  if (cls.n_zero > 0) {
    cls.tag = QuadricTag::Degenerate;
  } else if (cls.n_plus == 2) {
    cls.tag = QuadricTag::RuledNondegenerate;
  } else if (cls.n_plus == 3) {
    cls.tag = QuadricTag::NonruledNondegenerate;
  } else {
    cls.tag = QuadricTag::Empty;
  }
  return cls;
}

QuadricClass classify(const SymQuadric& Q, double zero_tol) { return classify(Q.matrix(), zero_tol); }

SymQuadric quadric_through_points(std::span<const HomPoint3> P, double rank_tol) {
  if (P.size() != 9 && P.size() != 10) {
    throw Error(Errc::InvalidArgument, "quadric fit takes 9 or 10 points");
  }
  const Eigen::MatrixXd V = veronese_matrix(P);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rank_tol * s[0]) ++rank;
  }
  if (rank < 9) {
    throw Error(Errc::PencilOfQuadrics,
                "Veronese matrix has rank " + std::to_string(rank) + "; more than one quadric fits");
  }
  if (rank == 10) throw Error(Errc::NoQuadric, "ten points in general position lie on no quadric");
  return SymQuadric::from_coefficients(Veronese(svd.matrixV().col(9)));
}

Eigen::Vector4d unit_cube_diagonal(const HomPoint3& f1, const HomPoint3& f2, double tol) {
  const Eigen::Vector4d& a = f1.coords();
  const Eigen::Vector4d& b = f2.coords();
  const double* bp[4] = {&b[0], &b[1], &b[2], &b[3]};
  Eigen::Vector4d minors;
  double* out[4] = {&minors[0], &minors[1], &minors[2], &minors[3]};
  simd::kernels().unit_cube_minors(a.data(), bp, 1, out);
  // Each minor is bounded by the product of the row norms of M.
  const double scale = 2.0 * a.cwiseAbs2().norm() * b.cwiseAbs2().norm();
  if (minors.cwiseAbs().maxCoeff() <= tol * scale) {
    throw Error(Errc::RankDeficient, "a pencil of diagonal quadrics fits the ten points");
  }
  return minors;
}

SymQuadric unit_cube_quadric(const HomPoint3& f1, const HomPoint3& f2, double tol) {
  return SymQuadric(Eigen::Matrix4d(unit_cube_diagonal(f1, f2, tol).asDiagonal()));
}

bool ruled_region_delta1(double alpha, double beta) {
  // Inertia (2,2) with delta = 1 > 0: either alpha, beta < 0 and gamma > 0, or
  // alpha, beta of opposite signs and gamma = -1 - alpha - beta < 0.
  const bool both_negative = alpha < 0.0 && beta < 0.0 && alpha + beta < -1.0;
  const bool opposite = (alpha > 0.0 && beta < 0.0) || (alpha < 0.0 && beta > 0.0);
  return both_negative || (opposite && alpha + beta > -1.0);
}

Delta1Coordinates delta1_coordinates(const HomPoint3& f1, const HomPoint3& f2, double tol) {
  const Eigen::Vector4d a = f1.coords().cwiseAbs2();
  const Eigen::Vector4d b = f2.coords().cwiseAbs2();
  // With delta = 1 and gamma = -1 - alpha - beta the two focal constraints read
  //   alpha (a1 - a3) + beta (a2 - a3) = a3 - a4   (same for b).
  const double det = (a[0] - a[2]) * (b[1] - b[2]) - (a[1] - a[2]) * (b[0] - b[2]);
  const double scale = 2.0 * a.norm() * b.norm();
  if (std::abs(det) <= tol * scale) {
    throw Error(Errc::AtInfinity, "last diagonal entry vanishes; cannot scale it to 1");
  }
  const double alpha_num = (a[2] - a[3]) * (b[1] - b[2]) - (a[1] - a[2]) * (b[2] - b[3]);
  const double beta_num = (a[0] - a[2]) * (b[2] - b[3]) - (a[2] - a[3]) * (b[0] - b[2]);
  return {alpha_num / det, beta_num / det};
}

std::optional<Eigen::Matrix4d> transport_from_unit_cube(const CubeConfig& C, double tol) {
  const CubeConfig unit = CubeConfig::unit();
  // Unknown t = vec_rowmajor(T); for each vertex the six 2x2 minors of
  // [c, T u] vanish: c_j (T u)_k - c_k (T u)_j = 0.
  Eigen::Matrix<double, 48, 16> A = Eigen::Matrix<double, 48, 16>::Zero();
  int row = 0;
  for (int i = 0; i < 8; ++i) {
    const Eigen::Vector4d u = unit.vertices()[i].normalized();
    const Eigen::Vector4d c = C.vertices()[i].normalized();
    for (int j = 0; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k, ++row) {
        for (int l = 0; l < 4; ++l) {
          A(row, 4 * k + l) += c[j] * u[l];
          A(row, 4 * j + l) -= c[k] * u[l];
        }
      }
    }
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 48, 16>> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s[15] <= tol * s[0])) return std::nullopt;
  Eigen::Matrix4d T;
  for (int i = 0; i < 16; ++i) T(i / 4, i % 4) = svd.matrixV()(i, 15);
  Eigen::JacobiSVD<Eigen::Matrix4d> tsvd(T);
  if (!(tsvd.singularValues()[3] > tol * tsvd.singularValues()[0])) return std::nullopt;
  return T;
}

bool is_unit_cube(const CubeConfig& C, double tol) {
  const CubeConfig unit = CubeConfig::unit();
  for (int i = 0; i < 8; ++i) {
    const Eigen::Vector4d& p = C.vertices()[i];
    if (p[3] == 0.0) return false;
    if (((p / p[3]) - unit.vertices()[i]).norm() > tol) return false;
  }
  return true;
}

namespace {

double grid_value(double lo, double hi, int i, int resolution) {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
}

RegionCell degenerate_cell(double u, double v) {
  RegionCell cell;
  cell.u = u;
  cell.v = v;
  cell.rank_deficient = true;
  return cell;
}

}  // namespace

RegionGrid region_grid(const CubeConfig& C, const HomPoint3& f1, const PlaneChart& chart,
                       int resolution, RegionMethod method) {
  if (resolution < 2) throw Error(Errc::InvalidArgument, "region grid resolution must be at least 2");
  if (method == RegionMethod::Auto) {
    method = is_unit_cube(C) ? RegionMethod::UnitCube : RegionMethod::General;
  }
  if (method == RegionMethod::UnitCube && !is_unit_cube(C)) {
    throw Error(Errc::InvalidArgument, "unit-cube fast path requested for a different cube");
  }

  const std::size_t n = static_cast<std::size_t>(resolution) * resolution;
  RegionGrid grid;
  grid.resolution = resolution;
  grid.cells.reserve(n);

  std::vector<double> us(n), vs(n);
  std::vector<Eigen::Vector4d> focal(n);
  for (int iv = 0; iv < resolution; ++iv) {
    for (int iu = 0; iu < resolution; ++iu) {
      const std::size_t k = static_cast<std::size_t>(iv) * resolution + iu;
      us[k] = grid_value(chart.u_min, chart.u_max, iu, resolution);
      vs[k] = grid_value(chart.v_min, chart.v_max, iv, resolution);
      const Eigen::Vector3d p = chart.point(us[k], vs[k]);
      focal[k] << p, 1.0;
    }
  }

  if (method == RegionMethod::UnitCube) {
    std::vector<double> b(4 * n), m(4 * n);
    for (std::size_t k = 0; k < n; ++k) {
      for (int c = 0; c < 4; ++c) b[c * n + k] = focal[k][c];
    }
    const double* bp[4] = {b.data(), b.data() + n, b.data() + 2 * n, b.data() + 3 * n};
    double* mp[4] = {m.data(), m.data() + n, m.data() + 2 * n, m.data() + 3 * n};
    simd::kernels().unit_cube_minors(f1.coords().data(), bp, n, mp);
    const double a_norm = f1.coords().cwiseAbs2().norm();
    for (std::size_t k = 0; k < n; ++k) {
      const Eigen::Vector4d diag(mp[0][k], mp[1][k], mp[2][k], mp[3][k]);
      const double scale = 2.0 * a_norm * focal[k].cwiseAbs2().norm();
      if (diag.cwiseAbs().maxCoeff() <= kDefaultTol * scale) {
        grid.cells.push_back(degenerate_cell(us[k], vs[k]));
        continue;
      }
      RegionCell cell;
      cell.u = us[k];
      cell.v = vs[k];
      cell.cls = classify(Eigen::Matrix4d(diag.asDiagonal()));
      grid.cells.push_back(cell);
    }
    return grid;
  }

  std::vector<HomPoint3> ten = C.points();
  ten.push_back(f1);
  ten.push_back(f1);
  for (std::size_t k = 0; k < n; ++k) {
    ten[9] = HomPoint3(focal[k]);
    try {
      RegionCell cell;
      cell.u = us[k];
      cell.v = vs[k];
      cell.cls = classify(quadric_through_points(ten));
      grid.cells.push_back(cell);
    } catch (const Error& e) {
      if (e.code() != Errc::PencilOfQuadrics && e.code() != Errc::NoQuadric) throw;
      grid.cells.push_back(degenerate_cell(us[k], vs[k]));
    }
  }
  return grid;
}

}  // namespace cubefm
