// Compiled with -mavx2 -mfma. Nothing in this file may run before the
// dispatcher in kernels.cpp has confirmed CPU support.

#include <immintrin.h>

#include "heatflow/simd/kernels.hpp"

namespace heatflow::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
  }
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), a1);
  }
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double weighted_sq_diff_avx2(const double* w, const double* v, double c, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(cv, _mm256_loadu_pd(v + i));
    const __m256d d1 = _mm256_sub_pd(cv, _mm256_loadu_pd(v + i + 4));
    a0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), d0), d0, a0);
    a1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i + 4), d1), d1, a1);
  }
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) {
    const double d = c - v[i];
    acc += w[i] * d * d;
  }
  return acc;
}

void complex_mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t k = 0;
  // Two complex values per register: [re0 im0 re1 im1].
  for (; k + 2 <= n; k += 2) {
    const __m256d av = _mm256_loadu_pd(a + 2 * k);
    const __m256d bv = _mm256_loadu_pd(b + 2 * k);
    const __m256d b_re = _mm256_movedup_pd(bv);          // [br0 br0 br1 br1]
    const __m256d b_im = _mm256_permute_pd(bv, 0b1111);  // [bi0 bi0 bi1 bi1]
    const __m256d a_sw = _mm256_permute_pd(av, 0b0101);  // [ai0 ar0 ai1 ar1]
    // [ar*br - ai*bi, ai*br + ar*bi]
    _mm256_storeu_pd(out + 2 * k, _mm256_fmaddsub_pd(av, b_re, _mm256_mul_pd(a_sw, b_im)));
  }
  for (; k < n; ++k) {
    const double ar = a[2 * k], ai = a[2 * k + 1];
    const double br = b[2 * k], bi = b[2 * k + 1];
    out[2 * k] = ar * br - ai * bi;
    out[2 * k + 1] = ar * bi + ai * br;
  }
}

void complex_scale_avx2(double* z, const double* m, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m128d mm = _mm_loadu_pd(m + k);
    // [m0 m0 m1 m1]
    const __m256d mv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(mm), 0b01010000);
    _mm256_storeu_pd(z + 2 * k, _mm256_mul_pd(_mm256_loadu_pd(z + 2 * k), mv));
  }
  for (; k < n; ++k) {
    z[2 * k] *= m[k];
    z[2 * k + 1] *= m[k];
  }
}

double dot3_avx2(const double* w, const double* a, const double* b, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i)),
                         _mm256_loadu_pd(b + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(a + i + 4)),
                         _mm256_loadu_pd(b + i + 4), a1);
  }
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

constexpr KernelTable kAvx2{Isa::avx2,           sum_avx2,         dot_avx2,
                            weighted_sq_diff_avx2, complex_mul_avx2, complex_scale_avx2,
                            dot3_avx2};

}  // namespace

namespace detail {
const KernelTable& avx2_table() { return kAvx2; }
}  // namespace detail

}  // namespace heatflow::simd
