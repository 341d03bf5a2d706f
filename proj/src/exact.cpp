#include "cubefm/exact.hpp"

#include <utility>

#include "cubefm/degeneracy.hpp"

namespace cubefm::exact {

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(Errc::InvalidArgument, "ragged rational matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

namespace {

using IntMatrix = std::vector<std::vector<mpz_class>>;

// Multiplies each row by the lcm of its denominators. Returns the integer
// matrix and the product of the multipliers.
std::pair<IntMatrix, mpz_class> integer_rows(const RationalMatrix& M) {
  IntMatrix out(M.rows(), std::vector<mpz_class>(M.cols()));
  mpz_class product = 1;
  for (std::size_t r = 0; r < M.rows(); ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < M.cols(); ++c) l = lcm(l, M(r, c).get_den());
    for (std::size_t c = 0; c < M.cols(); ++c) {
      out[r][c] = M(r, c).get_num() * (l / M(r, c).get_den());
    }
    product *= l;
  }
  return {std::move(out), product};
}

RationalPoint cross4(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c) {
  RationalPoint v;
  for (int i = 0; i < 4; ++i) {
    int cols[3];
    int k = 0;
    for (int j = 0; j < 4; ++j) {
      if (j != i) cols[k++] = j;
    }
    const Rational det = a[cols[0]] * (b[cols[1]] * c[cols[2]] - b[cols[2]] * c[cols[1]]) -
                         a[cols[1]] * (b[cols[0]] * c[cols[2]] - b[cols[2]] * c[cols[0]]) +
                         a[cols[2]] * (b[cols[0]] * c[cols[1]] - b[cols[1]] * c[cols[0]]);
    v[i] = (i % 2 == 0) ? Rational(det) : Rational(-det);
  }
  return v;
}

bool is_zero(const RationalPoint& p) {
  return p[0] == 0 && p[1] == 0 && p[2] == 0 && p[3] == 0;
}

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

}  // namespace

Rational exact_det(const RationalMatrix& M) {
  if (M.rows() != M.cols()) throw Error(Errc::InvalidArgument, "determinant of a non-square matrix");
  const std::size_t n = M.rows();
  if (n == 0) return Rational(1);
  auto [a, scale] = integer_rows(M);
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return Rational(0);
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  Rational det(a[n - 1][n - 1] * sign, scale);
  det.canonicalize();
  return det;
}

int exact_rank(const RationalMatrix& M) {
  auto a = integer_rows(M).first;
  const std::size_t rows = M.rows(), cols = M.cols();
  std::size_t rank = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[rank], a[p]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / prev;
      }
      a[i][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return static_cast<int>(rank);
}

Rational exact_bracket(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c,
                       const RationalPoint& d) {
  RationalMatrix m(4, 4);
  const RationalPoint* rows[4] = {&a, &b, &c, &d};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t k = 0; k < 4; ++k) m(r, k) = (*rows[r])[k];
  }
  return exact_det(m);
}

Rational exact_turnbull_young(const RationalTen& c) {
  Rational sum = 0;
  for (const auto& m : kReducedInvariant) {
    Rational term = m.sign;
    for (const auto& b : m.brackets) term *= exact_bracket(c[b[0]], c[b[1]], c[b[2]], c[b[3]]);
    sum += term;
  }
  return sum;
}

RationalMatrix exact_veronese(std::span<const RationalPoint> P) {
  RationalMatrix v(P.size(), 10);
  for (std::size_t i = 0; i < P.size(); ++i) {
    std::size_t col = 0;
    for (int a = 0; a < 4; ++a) {
      for (int b = a; b < 4; ++b) v(i, col++) = P[i][a] * P[i][b];
    }
  }
  return v;
}

RationalPoint exact_cube_closure(const RationalPoint& v1, const RationalPoint& v6,
                                 const RationalPoint& v7) {
  if (v1[3] != 1 || v6[3] != 1 || v7[3] != 1) {
    throw Error(Errc::InvalidArgument, "closure inputs must be affine with last coordinate 1");
  }
  if (v1[2] != 0 || v6[1] != 0 || v7[0] != 0) {
    throw Error(Errc::InvalidArgument, "vertices 1, 6, 7 must lie on z = 0, y = 0, x = 0");
  }
  const RationalPoint p2{0, 1, 0, 1}, p3{1, 0, 0, 1}, p9{0, 0, 1, 1};
  const RationalPoint h1 = cross4(v1, p2, v7);
  const RationalPoint h2 = cross4(v1, p3, v6);
  const RationalPoint h3 = cross4(v6, v7, p9);
  if (is_zero(h1) || is_zero(h2) || is_zero(h3)) {
    throw Error(Errc::DegenerateIntersection, "a closing facet is not spanned by its three vertices");
  }
  RationalPoint x = cross4(h1, h2, h3);
  if (is_zero(x) || x[3] == 0) {
    throw Error(Errc::DegenerateIntersection, "closing planes do not meet in a single affine point");
  }
  const Rational w = x[3];
  for (auto& c : x) c /= w;
  return x;
}

std::array<RationalPoint, 8> exact_cube_octet(const RationalPoint& v1, const RationalPoint& v6,
                                              const RationalPoint& v7) {
  return {RationalPoint{0, 0, 0, 1}, v1, RationalPoint{0, 1, 0, 1}, RationalPoint{1, 0, 0, 1},
          v6, v7, exact_cube_closure(v1, v6, v7), RationalPoint{0, 0, 1, 1}};
}

RationalTen exact_config_ten(const std::array<RationalPoint, 8>& cube, const RationalPoint& f1,
                             const RationalPoint& f2) {
  RationalTen c;
  for (int i = 0; i < 8; ++i) c[kCubeLabels[i]] = cube[i];
  c[4] = f1;
  c[5] = f2;
  return c;
}

Rational from_double(double x) { return Rational(x); }

namespace {

class RationalSampler {
 public:
  RationalSampler(std::uint64_t seed, int max_numerator) : rng_(seed), max_(max_numerator) {}

  // Value in (0, 2] with numerator and denominator at most max_.
  Rational positive() {
    std::uniform_int_distribution<int> den(1, max_);
    const int d = den(rng_);
    std::uniform_int_distribution<int> num(1, std::min(max_, 2 * d));
    Rational q(num(rng_), d);
    q.canonicalize();
    return q;
  }

  // Value in [-10, 10] with numerator and denominator at most max_.
  Rational bounded() {
    std::uniform_int_distribution<int> den(1, std::max(1, max_ / 10));
    const int d = den(rng_);
    std::uniform_int_distribution<int> num(-10 * d, 10 * d);
    Rational q(num(rng_), d);
    q.canonicalize();
    return q;
  }

  RationalPoint affine_point() { return {bounded(), bounded(), bounded(), 1}; }

  // Invertible integer matrix with entries in [-10, 10].
  RationalMatrix projective_map() {
    std::uniform_int_distribution<int> entry(-10, 10);
    for (;;) {
      RationalMatrix t(4, 4);
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) t(r, c) = entry(rng_);
      if (exact_det(t) != 0) return t;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  int max_;
};

RationalPoint transform_point(const RationalMatrix& t, const RationalPoint& p) {
  RationalPoint out;
  for (std::size_t r = 0; r < 4; ++r) {
    out[r] = 0;
    for (std::size_t c = 0; c < 4; ++c) out[r] += t(r, c) * p[c];
  }
  return out;
}

Octet to_doubles(const std::array<RationalPoint, 8>& cube) {
  Octet out;
  for (int i = 0; i < 8; ++i) {
    for (int k = 0; k < 4; ++k) out[i][k] = cube[i][k].get_d();
  }
  return out;
}

// Normal-form rational cube that is also convex; gives up after many draws.
std::array<RationalPoint, 8> sample_convex_cube(RationalSampler& s) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Rational z = 0;
    const RationalPoint v1{s.positive(), s.positive(), z, 1};
    const RationalPoint v6{s.positive(), z, s.positive(), 1};
    const RationalPoint v7{z, s.positive(), s.positive(), 1};
    try {
      auto cube = exact_cube_octet(v1, v6, v7);
      if (is_combinatorial_cube(to_doubles(cube)).is_cube) return cube;
    } catch (const Error&) {
    }
  }
  throw Error(Errc::ExhaustedRetries, "no convex rational cube found");
}

}  // namespace

CertificateReport run_exact_certificate(const CertificateOptions& options) {
  RationalSampler sampler(options.seed, options.max_numerator);
  CertificateReport report;

  for (int t = 0; t < options.cube_trials; ++t) {
    auto cube = sample_convex_cube(sampler);
    if (options.include_projective && t % 2 == 1) {
      const RationalMatrix map = sampler.projective_map();
      for (auto& p : cube) p = transform_point(map, p);
    }
    const RationalTen ten = exact_config_ten(cube, sampler.affine_point(), sampler.affine_point());
    ++report.cube_trials;
    if (exact_turnbull_young(ten) == 0) ++report.invariant_zero;
    const int rank = exact_rank(exact_veronese(cube));
    ++report.observed_ranks[rank];
    if (rank <= 7) ++report.rank_at_most_seven;
  }

  for (int t = 0; t < options.controls; ++t) {
    auto cube = sample_convex_cube(sampler);
    // Push vertex 8 off its three facet planes.
    cube[6][0] += sampler.positive();
    cube[6][1] += sampler.positive();
    cube[6][2] += sampler.positive();
    const RationalTen ten = exact_config_ten(cube, sampler.affine_point(), sampler.affine_point());
    ++report.controls;
    if (exact_turnbull_young(ten) != 0) ++report.controls_nonzero;
  }
  return report;
}

}  // namespace cubefm::exact
