#pragma once

// Exact rational arithmetic for certifying the cube identities: fraction-free
// determinants and ranks, the reduced bracket invariant, and exact cube
// closure in the normal form.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "cubefm/errors.hpp"

namespace cubefm::exact {

using Rational = mpq_class;
using RationalPoint = std::array<Rational, 4>;
using RationalTen = std::array<RationalPoint, 10>;

class RationalMatrix {
 public:
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> data_;
};

// Bareiss elimination on the row-wise integer scaling of M.
Rational exact_det(const RationalMatrix& M);

// Fraction-free Gaussian elimination; exact for any shape.
int exact_rank(const RationalMatrix& M);

Rational exact_bracket(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c,
                       const RationalPoint& d);

// Same four-monomial polynomial as turnbull_young_reduced, indexed by label.
Rational exact_turnbull_young(const RationalTen& c);

RationalMatrix exact_veronese(std::span<const RationalPoint> P);

// Vertex 8 of the normal-form cube with vertex 1 on z = 0, vertex 6 on y = 0
// and vertex 7 on x = 0 (all affine, last coordinate 1). Throws
// DegenerateIntersection if the three closing planes do not meet in one
// affine point.
RationalPoint exact_cube_closure(const RationalPoint& v1, const RationalPoint& v6,
                                 const RationalPoint& v7);

// Normal-form octet in label order 0,1,2,3,6,7,8,9.
std::array<RationalPoint, 8> exact_cube_octet(const RationalPoint& v1, const RationalPoint& v6,
                                              const RationalPoint& v7);

RationalTen exact_config_ten(const std::array<RationalPoint, 8>& cube, const RationalPoint& f1,
                             const RationalPoint& f2);

// Exact conversion; every finite double is a dyadic rational.
Rational from_double(double x);

struct CertificateOptions {
  int cube_trials = 100;
  int controls = 20;
  // Odd-numbered trials push the cube through a random integer projective
  // map before evaluation.
  bool include_projective = true;
  int max_numerator = 1000;
  std::uint64_t seed = 1;
};

struct CertificateReport {
  int cube_trials = 0;
  int invariant_zero = 0;
  int rank_at_most_seven = 0;
  int controls = 0;
  int controls_nonzero = 0;
  std::map<int, int> observed_ranks;  // Veronese rank of the eight vertices -> count

  bool passed() const {
    return invariant_zero == cube_trials && rank_at_most_seven == cube_trials &&
           controls_nonzero == controls;
  }
};

// Randomized certificate: random rational cubes with random rational focal
// points must give a zero invariant and Veronese rank <= 7; cubes with a
// perturbed vertex 8 must give a nonzero invariant.
CertificateReport run_exact_certificate(const CertificateOptions& options);

}  // namespace cubefm::exact
