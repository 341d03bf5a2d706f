#include <doctest.h>

#include <cmath>
#include <random>

#include "cubefm/quadrics.hpp"
#include "support.hpp"

using namespace cubefm;
using support::error_of;

namespace {

QuadricClass classify_diag(double a, double b, double c, double d) {
  return classify(Eigen::Matrix4d(Eigen::Vector4d(a, b, c, d).asDiagonal()));
}

// Signed maximal minors of [1 1 1 1; f1.^2; f2.^2] by explicit 3x3 determinants.
Eigen::Vector4d oracle_minors(const Eigen::Vector4d& f1, const Eigen::Vector4d& f2) {
  Eigen::Matrix<double, 3, 4> M;
  M.row(0).setOnes();
  M.row(1) = f1.cwiseAbs2().transpose();
  M.row(2) = f2.cwiseAbs2().transpose();
  Eigen::Vector4d out;
  for (int k = 0; k < 4; ++k) {
    Eigen::Matrix3d S;
    int c = 0;
    for (int j = 0; j < 4; ++j)
      if (j != k) S.col(c++) = M.col(j);
    out[k] = (k % 2 ? -1.0 : 1.0) * S.determinant();
  }
  return out;
}

Eigen::Matrix4d random_invertible(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Matrix4d T;
  do {
    for (int i = 0; i < 16; ++i) T(i / 4, i % 4) = u(rng);
  } while (std::abs(T.determinant()) < 0.1);
  return T;
}

// Random projective image of the unit cube that is still a convex cube,
// i.e. the map keeps the plane at infinity away from it.
std::pair<Eigen::Matrix4d, CubeConfig> mapped_unit_cube(std::mt19937_64& rng) {
  for (;;) {
    const Eigen::Matrix4d T = random_invertible(rng);
    Octet v = CubeConfig::unit().vertices();
    for (auto& p : v) p = T * p;
    if (is_combinatorial_cube(v, 1e-8).is_cube) return {T, CubeConfig::validated(v, 1e-8)};
  }
}

}  // namespace

TEST_CASE("quadric through points") {
  std::vector<HomPoint3> P = CubeConfig::unit().points();
  P.emplace_back(-2.0, -3.0, -2.0, 1.0);
  P.emplace_back(-2.0, -3.0, -1.0, 1.0);
  const SymQuadric Q = quadric_through_points(P);
  const SymQuadric expected(Eigen::Matrix4d(Eigen::Vector4d(-24, 9, 0, 15).asDiagonal()));
  CHECK(equal_up_to_scale(Q, expected));

  std::vector<HomPoint3> sphere;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 9; ++i) {
    Eigen::Vector3d d(g(rng), g(rng), g(rng));
    d.normalize();
    sphere.emplace_back(d.x(), d.y(), d.z(), 1.0);
  }
  CHECK(equal_up_to_scale(quadric_through_points(sphere),
                          SymQuadric(Eigen::Matrix4d(Eigen::Vector4d(1, 1, 1, -1).asDiagonal()))));

  std::vector<HomPoint3> nine = CubeConfig::unit().points();
  nine.emplace_back(-2.0, -3.0, -2.0, 1.0);
  CHECK(error_of([&] { quadric_through_points(nine); }) == Errc::PencilOfQuadrics);

  std::vector<HomPoint3> generic;
  for (int i = 0; i < 10; ++i) generic.emplace_back(support::random_point(rng));
  CHECK(error_of([&] { quadric_through_points(generic); }) == Errc::NoQuadric);
}

TEST_CASE("unit cube quadric from minors") {
  const HomPoint3 f1(-2, -3, -2, 1), f2(-2, -3, -1, 1);
  const Eigen::Vector4d d = unit_cube_diagonal(f1, f2);
  const Eigen::Vector4d o = oracle_minors(f1.coords(), f2.coords());
  CHECK(std::abs(d.normalized().dot(o.normalized())) == doctest::Approx(1.0));
  CHECK(std::abs(d.normalized().dot(Eigen::Vector4d(-24, 9, 0, 15).normalized())) ==
        doctest::Approx(1.0));

  CHECK(error_of([] {
          unit_cube_diagonal(HomPoint3(1, 2, 3, 1), HomPoint3(-1, 2, -3, 1));
        }) == Errc::RankDeficient);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Vector4d a = support::random_point(rng, 4.0), b = support::random_point(rng, 4.0);
    const SymQuadric Q = unit_cube_quadric(HomPoint3(a), HomPoint3(b));
    Eigen::Matrix<double, 3, 4> M;
    M.row(0).setOnes();
    M.row(1) = a.cwiseAbs2().transpose();
    M.row(2) = b.cwiseAbs2().transpose();
    const Eigen::Vector4d diag = Q.matrix().diagonal();
    CHECK((M * diag).norm() <= 1e-10 * M.norm() * diag.norm());
    const double qn = Q.matrix().norm();
    for (const auto& v : CubeConfig::unit().vertices())
      CHECK(std::abs(Q.evaluate(v)) <= 1e-10 * qn * v.squaredNorm());
    CHECK(std::abs(Q.evaluate(a)) <= 1e-10 * qn * a.squaredNorm());
    CHECK(std::abs(Q.evaluate(b)) <= 1e-10 * qn * b.squaredNorm());
  }
}

TEST_CASE("inertia classification") {
  CHECK(classify_diag(1, -1, 1, -1).tag == QuadricTag::RuledNondegenerate);
  CHECK(classify_diag(1, 1, 1, -1).tag == QuadricTag::NonruledNondegenerate);
  CHECK(classify_diag(1, 1, 1, 1).tag == QuadricTag::Empty);
  const auto c = classify_diag(-24, 9, 0, 15);
  CHECK(c.tag == QuadricTag::Degenerate);
  CHECK(c.n_plus == 2);
  CHECK(c.n_minus == 1);
  CHECK(c.n_zero == 1);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    Eigen::Matrix4d A;
    for (int i = 0; i < 16; ++i) A(i / 4, i % 4) = g(rng);
    const Eigen::Matrix4d S = A + A.transpose();
    CHECK(classify(S) == classify(Eigen::Matrix4d(-3.0 * S)));
  }
}

TEST_CASE("ruled region in delta-one coordinates") {
  CHECK(ruled_region_delta1(-1, -1));
  CHECK(ruled_region_delta1(2, -0.5));
  CHECK_FALSE(ruled_region_delta1(1, 1));
  CHECK(classify_diag(1, 1, -3, 1).tag == QuadricTag::NonruledNondegenerate);

  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const double a = -5.0 + 10.0 * (i + 0.5) / 200.0, b = -5.0 + 10.0 * (j + 0.5) / 200.0;
      const auto c = classify_diag(a, b, -a - b - 1.0, 1.0);
      if (c.margin <= 1e-6) continue;
      ++compared;
      CHECK(ruled_region_delta1(a, b) == (c.tag == QuadricTag::RuledNondegenerate));
    }
  }
  CHECK(compared > 39000);
}

TEST_CASE("delta-one coordinates") {
  const auto d = delta1_coordinates(HomPoint3(-2, -3, -2, 1), HomPoint3(-2, -3, -1, 1));
  CHECK(d.alpha == doctest::Approx(-24.0 / 15.0));
  CHECK(d.beta == doctest::Approx(9.0 / 15.0));

  const auto s = delta1_coordinates(HomPoint3(2, 1, 1, 1), HomPoint3(1, 2, 1, 1));
  CHECK(s.alpha == doctest::Approx(s.beta));

  CHECK(error_of([] {
          delta1_coordinates(HomPoint3(1, 2, 3, 1), HomPoint3(2, 4, 6, 1));
        }) == Errc::AtInfinity);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Vector4d a = support::random_point(rng, 4.0), b = support::random_point(rng, 4.0);
    const Eigen::Vector4d m = oracle_minors(a, b);
    const auto c = delta1_coordinates(HomPoint3(a), HomPoint3(b));
    CHECK(support::rel_diff(c.alpha, m[0] / m[3]) < 1e-9);
    CHECK(support::rel_diff(c.beta, m[1] / m[3]) < 1e-9);
  }
}

TEST_CASE("projective transport") {
  const auto I = transport_from_unit_cube(CubeConfig::unit());
  REQUIRE(I.has_value());
  CHECK(grassmann_angle(Eigen::VectorXd(I->reshaped()),
                        Eigen::VectorXd(Eigen::Matrix4d::Identity().reshaped())) < 1e-10);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto [T0, C] = mapped_unit_cube(rng);
    const auto T = transport_from_unit_cube(C);
    REQUIRE(T.has_value());
    CHECK(grassmann_angle(Eigen::VectorXd(T->reshaped()), Eigen::VectorXd(T0.reshaped())) < 1e-8);

    // Classes agree between the transported and the original configuration.
    const Eigen::Vector4d g1 = support::random_point(rng, 3.0), g2 = support::random_point(rng, 3.0);
    auto Pu = CubeConfig::unit().points();
    Pu.emplace_back(g1);
    Pu.emplace_back(g2);
    auto Pc = C.points();
    Pc.emplace_back(Eigen::Vector4d(T0 * g1));
    Pc.emplace_back(Eigen::Vector4d(T0 * g2));
    const auto cu = classify(quadric_through_points(Pu));
    if (cu.margin < 1e-6) continue;
    CHECK(classify(quadric_through_points(Pc)) == cu);
  }

  int not_equivalent = 0;
  for (int t = 0; t < 20; ++t) {
    not_equivalent += !transport_from_unit_cube(random_combinatorial_cube(rng, 2.0)).has_value();
  }
  CHECK(not_equivalent >= 18);
}

TEST_CASE("failure region grid") {
  PlaneChart chart;
  chart.origin = Eigen::Vector3d(0, 0, 0.5);
  chart.u_min = chart.v_min = -3.0;
  chart.u_max = chart.v_max = 3.0;
  const HomPoint3 f1(2, 0.5, 3, 1);
  const auto fast = region_grid(CubeConfig::unit(), f1, chart, 30, RegionMethod::UnitCube);
  const auto slow = region_grid(CubeConfig::unit(), f1, chart, 30, RegionMethod::General);
  REQUIRE(fast.cells.size() == 900);
  int ruled = 0, nonruled = 0;
  for (std::size_t i = 0; i < fast.cells.size(); ++i) {
    const auto& a = fast.cells[i];
    ruled += a.cls.tag == QuadricTag::RuledNondegenerate;
    nonruled += a.cls.tag == QuadricTag::NonruledNondegenerate;
    if (a.cls.margin > 1e-6) CHECK(a.cls == slow.cells[i].cls);
  }
  CHECK(ruled > 0);
  CHECK(nonruled > 0);
  CHECK(fast.at(2, 5).v == doctest::Approx(fast.cells[5 * 30].v));

  // A grid whose centre is f1 itself.
  PlaneChart around;
  around.origin = f1.affine();
  const auto g = region_grid(CubeConfig::unit(), f1, around, 3, RegionMethod::General);
  CHECK(g.at(1, 1).cls.tag == QuadricTag::Degenerate);
  CHECK(g.at(1, 1).failure());
  const auto gu = region_grid(CubeConfig::unit(), f1, around, 3, RegionMethod::UnitCube);
  CHECK(gu.at(1, 1).failure());

  CHECK(error_of([&] { region_grid(CubeConfig::unit(), f1, chart, 1); }) == Errc::InvalidArgument);
}
