#include "cubefm/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

namespace cubefm::simd {
namespace {

constexpr std::size_t kLanes = 4;

// Copies up to four trailing elements into a zero-padded lane buffer.
inline __m256d load_tail(const double* src, std::size_t count) {
  alignas(32) double buf[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::copy_n(src, count, buf);
  return _mm256_load_pd(buf);
}

inline void store_tail(double* dst, __m256d v, std::size_t count) {
  alignas(32) double buf[kLanes];
  _mm256_store_pd(buf, v);
  std::copy_n(buf, count, dst);
}

void veronese_rows_avx2(const double* const p[4], std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v[4] = {_mm256_loadu_pd(p[0] + i), _mm256_loadu_pd(p[1] + i),
                          _mm256_loadu_pd(p[2] + i), _mm256_loadu_pd(p[3] + i)};
    int col = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b, ++col)
        _mm256_storeu_pd(out + static_cast<std::size_t>(col) * n + i, _mm256_mul_pd(v[a], v[b]));
  }
  if (i < n) {
    const std::size_t rest = n - i;
    const __m256d v[4] = {load_tail(p[0] + i, rest), load_tail(p[1] + i, rest),
                          load_tail(p[2] + i, rest), load_tail(p[3] + i, rest)};
    int col = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b, ++col)
        store_tail(out + static_cast<std::size_t>(col) * n + i, _mm256_mul_pd(v[a], v[b]), rest);
  }
}

void kron_rows_avx2(const double* const x[3], const double* const y[3], std::size_t n,
                    double* out) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d xv[3] = {_mm256_loadu_pd(x[0] + i), _mm256_loadu_pd(x[1] + i),
                           _mm256_loadu_pd(x[2] + i)};
    for (int r = 0; r < 3; ++r) {
      const __m256d yr = _mm256_loadu_pd(y[r] + i);
      for (int c = 0; c < 3; ++c)
        _mm256_storeu_pd(out + static_cast<std::size_t>(3 * r + c) * n + i,
                         _mm256_mul_pd(yr, xv[c]));
    }
  }
  if (i < n) {
    const std::size_t rest = n - i;
    const __m256d xv[3] = {load_tail(x[0] + i, rest), load_tail(x[1] + i, rest),
                           load_tail(x[2] + i, rest)};
    for (int r = 0; r < 3; ++r) {
      const __m256d yr = load_tail(y[r] + i, rest);
      for (int c = 0; c < 3; ++c)
        store_tail(out + static_cast<std::size_t>(3 * r + c) * n + i, _mm256_mul_pd(yr, xv[c]),
                   rest);
    }
  }
}

inline __m256d epipolar_lane(const __m256d* fv, const __m256d x[3], const __m256d y[3]) {
  const __m256d fx0 = _mm256_fmadd_pd(fv[2], x[2], _mm256_fmadd_pd(fv[1], x[1], _mm256_mul_pd(fv[0], x[0])));
  const __m256d fx1 = _mm256_fmadd_pd(fv[5], x[2], _mm256_fmadd_pd(fv[4], x[1], _mm256_mul_pd(fv[3], x[0])));
  const __m256d fx2 = _mm256_fmadd_pd(fv[8], x[2], _mm256_fmadd_pd(fv[7], x[1], _mm256_mul_pd(fv[6], x[0])));
  const __m256d r = _mm256_fmadd_pd(y[2], fx2, _mm256_fmadd_pd(y[1], fx1, _mm256_mul_pd(y[0], fx0)));
  const __m256d nx = _mm256_fmadd_pd(x[2], x[2], _mm256_fmadd_pd(x[1], x[1], _mm256_mul_pd(x[0], x[0])));
  const __m256d ny = _mm256_fmadd_pd(y[2], y[2], _mm256_fmadd_pd(y[1], y[1], _mm256_mul_pd(y[0], y[0])));
  return _mm256_div_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(nx, ny));
}

double epipolar_sq_sum_avx2(const double* f, const double* const x[3],
                            const double* const y[3], std::size_t n) {
  __m256d fv[9];
  for (int k = 0; k < 9; ++k) fv[k] = _mm256_set1_pd(f[k]);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d xv[3] = {_mm256_loadu_pd(x[0] + i), _mm256_loadu_pd(x[1] + i),
                           _mm256_loadu_pd(x[2] + i)};
    const __m256d yv[3] = {_mm256_loadu_pd(y[0] + i), _mm256_loadu_pd(y[1] + i),
                           _mm256_loadu_pd(y[2] + i)};
    acc = _mm256_add_pd(acc, epipolar_lane(fv, xv, yv));
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  if (i < n) {
    // Padding lanes use the point (1,1,1) in both images so the division is
    // finite; only the first `rest` lanes are accumulated.
    const std::size_t rest = n - i;
    alignas(32) double buf[6][kLanes];
    for (auto& row : buf) std::fill_n(row, kLanes, 1.0);
    for (int k = 0; k < 3; ++k) {
      std::copy_n(x[k] + i, rest, buf[k]);
      std::copy_n(y[k] + i, rest, buf[3 + k]);
    }
    const __m256d xv[3] = {_mm256_load_pd(buf[0]), _mm256_load_pd(buf[1]), _mm256_load_pd(buf[2])};
    const __m256d yv[3] = {_mm256_load_pd(buf[3]), _mm256_load_pd(buf[4]), _mm256_load_pd(buf[5])};
    _mm256_store_pd(lanes, epipolar_lane(fv, xv, yv));
    for (std::size_t k = 0; k < rest; ++k) sum += lanes[k];
  }
  return sum;
}

inline __m256d det3(__m256d ai, __m256d aj, __m256d ak, __m256d bi, __m256d bj, __m256d bk) {
  const __m256d t0 = _mm256_sub_pd(_mm256_mul_pd(aj, bk), _mm256_mul_pd(ak, bj));
  const __m256d t1 = _mm256_sub_pd(_mm256_mul_pd(ai, bk), _mm256_mul_pd(ak, bi));
  const __m256d t2 = _mm256_sub_pd(_mm256_mul_pd(ai, bj), _mm256_mul_pd(aj, bi));
  return _mm256_add_pd(_mm256_sub_pd(t0, t1), t2);
}

inline void minors_lane(const __m256d a[4], const __m256d braw[4], __m256d out[4]) {
  const __m256d neg = _mm256_set1_pd(-0.0);
  __m256d b[4];
  for (int k = 0; k < 4; ++k) b[k] = _mm256_mul_pd(braw[k], braw[k]);
  out[0] = det3(a[1], a[2], a[3], b[1], b[2], b[3]);
  out[1] = _mm256_xor_pd(det3(a[0], a[2], a[3], b[0], b[2], b[3]), neg);
  out[2] = det3(a[0], a[1], a[3], b[0], b[1], b[3]);
  out[3] = _mm256_xor_pd(det3(a[0], a[1], a[2], b[0], b[1], b[2]), neg);
}

void unit_cube_minors_avx2(const double* a, const double* const b[4], std::size_t n,
                           double* const out[4]) {
  __m256d av[4];
  for (int k = 0; k < 4; ++k) av[k] = _mm256_set1_pd(a[k] * a[k]);
  std::size_t i = 0;
  __m256d res[4];
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d bv[4] = {_mm256_loadu_pd(b[0] + i), _mm256_loadu_pd(b[1] + i),
                           _mm256_loadu_pd(b[2] + i), _mm256_loadu_pd(b[3] + i)};
    minors_lane(av, bv, res);
    for (int k = 0; k < 4; ++k) _mm256_storeu_pd(out[k] + i, res[k]);
  }
  if (i < n) {
    const std::size_t rest = n - i;
    const __m256d bv[4] = {load_tail(b[0] + i, rest), load_tail(b[1] + i, rest),
                           load_tail(b[2] + i, rest), load_tail(b[3] + i, rest)};
    minors_lane(av, bv, res);
    for (int k = 0; k < 4; ++k) store_tail(out[k] + i, res[k], rest);
  }
}

}  // namespace

namespace detail {
const Kernels kAvx2Kernels{Isa::Avx2, veronese_rows_avx2, kron_rows_avx2, epipolar_sq_sum_avx2,
                           unit_cube_minors_avx2};
}  // namespace detail

}  // namespace cubefm::simd
