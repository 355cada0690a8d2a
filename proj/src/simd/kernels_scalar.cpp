#include "heatflow/simd/kernels.hpp"

namespace heatflow::simd {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double weighted_sq_diff_scalar(const double* w, const double* v, double c, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = c - v[i];
    acc += w[i] * d * d;
  }
  return acc;
}

void complex_mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[2 * k], ai = a[2 * k + 1];
    const double br = b[2 * k], bi = b[2 * k + 1];
    out[2 * k] = ar * br - ai * bi;
    out[2 * k + 1] = ar * bi + ai * br;
  }
}

void complex_scale_scalar(double* z, const double* m, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    z[2 * k] *= m[k];
    z[2 * k + 1] *= m[k];
  }
}

double dot3_scalar(const double* w, const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

constexpr KernelTable kScalar{Isa::scalar,           sum_scalar,         dot_scalar,
                              weighted_sq_diff_scalar, complex_mul_scalar, complex_scale_scalar,
                              dot3_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace heatflow::simd
