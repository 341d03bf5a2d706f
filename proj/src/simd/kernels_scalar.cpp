#include "cubefm/simd/kernels.hpp"

namespace cubefm::simd {
namespace {

void veronese_rows_scalar(const double* const p[4], std::size_t n, double* out) {
  int col = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b, ++col) {
      double* dst = out + static_cast<std::size_t>(col) * n;
      for (std::size_t i = 0; i < n; ++i) dst[i] = p[a][i] * p[b][i];
    }
  }
}

void kron_rows_scalar(const double* const x[3], const double* const y[3], std::size_t n,
                      double* out) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double* dst = out + static_cast<std::size_t>(3 * r + c) * n;
      for (std::size_t i = 0; i < n; ++i) dst[i] = y[r][i] * x[c][i];
    }
  }
}

double epipolar_sq_sum_scalar(const double* f, const double* const x[3],
                              const double* const y[3], std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = x[0][i], x1 = x[1][i], x2 = x[2][i];
    const double y0 = y[0][i], y1 = y[1][i], y2 = y[2][i];
    const double fx0 = f[0] * x0 + f[1] * x1 + f[2] * x2;
    const double fx1 = f[3] * x0 + f[4] * x1 + f[5] * x2;
    const double fx2 = f[6] * x0 + f[7] * x1 + f[8] * x2;
    const double r = y0 * fx0 + y1 * fx1 + y2 * fx2;
    const double nx = x0 * x0 + x1 * x1 + x2 * x2;
    const double ny = y0 * y0 + y1 * y1 + y2 * y2;
    sum += r * r / (nx * ny);
  }
  return sum;
}

// det [1 1 1; a_i a_j a_k; b_i b_j b_k]
inline double det3(double ai, double aj, double ak, double bi, double bj, double bk) {
  return (aj * bk - ak * bj) - (ai * bk - ak * bi) + (ai * bj - aj * bi);
}

void unit_cube_minors_scalar(const double* a, const double* const b[4], std::size_t n,
                             double* const out[4]) {
  const double a0 = a[0] * a[0], a1 = a[1] * a[1], a2 = a[2] * a[2], a3 = a[3] * a[3];
  for (std::size_t i = 0; i < n; ++i) {
    const double b0 = b[0][i] * b[0][i], b1 = b[1][i] * b[1][i];
    const double b2 = b[2][i] * b[2][i], b3 = b[3][i] * b[3][i];
    out[0][i] = det3(a1, a2, a3, b1, b2, b3);
    out[1][i] = -det3(a0, a2, a3, b0, b2, b3);
    out[2][i] = det3(a0, a1, a3, b0, b1, b3);
    out[3][i] = -det3(a0, a1, a2, b0, b1, b2);
  }
}

}  // namespace

namespace detail {
const Kernels kScalarKernels{Isa::Scalar, veronese_rows_scalar, kron_rows_scalar,
                             epipolar_sq_sum_scalar, unit_cube_minors_scalar};
}  // namespace detail

}  // namespace cubefm::simd
