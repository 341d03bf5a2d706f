#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// where the build and CPU allow, an AVX2 version selected at runtime. Inputs
// are structure-of-arrays; matrix outputs are column-major with leading
// dimension n so they can back an Eigen::MatrixXd directly.

#include <cstddef>

namespace cubefm::simd {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa) noexcept;

struct Kernels {
  Isa isa;

  // out(i, :) = degree-two monomials of point i, ordered
  // x1^2, x1x2, x1x3, x1x4, x2^2, x2x3, x2x4, x3^2, x3x4, x4^2.
  void (*veronese_rows)(const double* const p[4], std::size_t n, double* out);

  // out(i, 3r + c) = y_i[r] * x_i[c], i.e. kron(y_i, x_i).
  void (*kron_rows)(const double* const x[3], const double* const y[3], std::size_t n,
                    double* out);

  // sum_i (y_i^T F x_i)^2 / (|x_i|^2 |y_i|^2), F given row-major.
  double (*epipolar_sq_sum)(const double* f, const double* const x[3],
                            const double* const y[3], std::size_t n);

  // Signed maximal minors of the 3x4 matrix [1 1 1 1; a.^2; b_i.^2] for a
  // fixed a and a batch of points b_i. out[k][i] is the k-th minor.
  void (*unit_cube_minors)(const double* a, const double* const b[4], std::size_t n,
                           double* const out[4]);
};

// Kernels for the best ISA supported by this build and CPU. The environment
// variable CUBEFM_ISA=scalar forces the reference path.
const Kernels& kernels();

// nullptr when the ISA is not compiled in or not supported by the CPU.
const Kernels* kernels_for(Isa isa);

namespace detail {
extern const Kernels kScalarKernels;
#if defined(CUBEFM_WITH_AVX2)
extern const Kernels kAvx2Kernels;
#endif
}  // namespace detail

}  // namespace cubefm::simd
