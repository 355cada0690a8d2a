#pragma once

// Data-parallel inner loops shared by the grid, functional and residual code.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2/FMA
// variant is compiled into a separate translation unit and selected at runtime
// when the CPU supports it. The variants are not bit-identical (reductions
// are reassociated) but agree to a few ulps of the summed magnitude; the
// equivalence is exercised in tests/test_simd.cpp.

#include <cstddef>
#include <span>
#include <string_view>

namespace heatflow::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i w[i] * (c - v[i])^2
  double (*weighted_sq_diff)(const double* w, const double* v, double c, std::size_t n);
  // out[k] = a[k] * b[k] on interleaved (re, im) pairs; n counts complex values.
  void (*complex_mul)(const double* a, const double* b, double* out, std::size_t n);
  // z[k] *= m[k] for real multipliers m on interleaved complex z.
  void (*complex_scale)(double* z, const double* m, std::size_t n);
  // sum_i w[i] * a[i] * b[i]
  double (*dot3)(const double* w, const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();

/// AVX2 table, or nullptr when it was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// Best ISA supported by this CPU and build.
Isa detected_isa();

/// Table used by the library. Defaults to detected_isa(); the environment
/// variable HEATFLOW_SIMD=scalar forces the reference path.
const KernelTable& active();

/// Overrides the active table. Requesting avx2 on an unsupported machine
/// throws std::runtime_error.
void set_active(Isa isa);

std::string_view isa_name(Isa isa);

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double weighted_sq_diff(std::span<const double> w, std::span<const double> v, double c) {
  return active().weighted_sq_diff(w.data(), v.data(), c, w.size());
}

inline double dot3(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  return active().dot3(w.data(), a.data(), b.data(), w.size());
}

}  // namespace heatflow::simd
