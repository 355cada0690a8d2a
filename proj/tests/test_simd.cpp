#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "heatflow/grid.hpp"
#include "heatflow/simd/kernels.hpp"

using namespace heatflow;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double abs_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

// Lengths around the vector width and unroll factor, plus a long one.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 100, 1023, 4096};

}  // namespace

TEST_CASE("scalar table is always available") {
  const auto& k = simd::scalar_kernels();
  CHECK(k.isa == simd::Isa::scalar);
  const std::vector<double> x{1.0, 2.0, 3.5};
  CHECK(k.sum(x.data(), 3) == 6.5);
  CHECK(k.dot(x.data(), x.data(), 3) == 1.0 + 4.0 + 12.25);
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
}

TEST_CASE("reductions agree between scalar and avx2") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("AVX2 not available; equivalence skipped");
    return;
  }
  const auto& ref = simd::scalar_kernels();
  for (std::size_t n : kLengths) {
    CAPTURE(n);
    const auto a = random_vector(n, 1 + n), b = random_vector(n, 2 + n), w = random_vector(n, 3 + n, 0.0, 1.0);
    const double eps = 1e-14 * (1.0 + abs_sum(a) + abs_sum(b));
    CHECK(std::abs(avx->sum(a.data(), n) - ref.sum(a.data(), n)) <= eps);
    CHECK(std::abs(avx->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= eps);
    CHECK(std::abs(avx->dot3(w.data(), a.data(), b.data(), n) - ref.dot3(w.data(), a.data(), b.data(), n)) <= eps);
    const double c = 0.37;
    CHECK(std::abs(avx->weighted_sq_diff(w.data(), a.data(), c, n) - ref.weighted_sq_diff(w.data(), a.data(), c, n)) <=
          4 * eps);
  }
}

TEST_CASE("complex kernels agree between scalar and avx2") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (avx == nullptr) return;
  const auto& ref = simd::scalar_kernels();
  for (std::size_t n : kLengths) {
    CAPTURE(n);
    const auto a = random_vector(2 * n, 10 + n), b = random_vector(2 * n, 20 + n), m = random_vector(n, 30 + n);
    std::vector<double> o1(2 * n), o2(2 * n);
    ref.complex_mul(a.data(), b.data(), o1.data(), n);
    avx->complex_mul(a.data(), b.data(), o2.data(), n);
    for (std::size_t i = 0; i < 2 * n; ++i) CHECK(std::abs(o1[i] - o2[i]) <= 1e-15);
    std::vector<double> z1 = a, z2 = a;
    ref.complex_scale(z1.data(), m.data(), n);
    avx->complex_scale(z2.data(), m.data(), n);
    CHECK(z1 == z2);
  }
}

TEST_CASE("complex_mul matches std::complex") {
  const auto& k = simd::active();
  const std::vector<double> a{1.0, 2.0, -0.5, 3.0}, b{0.25, -1.0, 2.0, 2.0};
  std::vector<double> out(4);
  k.complex_mul(a.data(), b.data(), out.data(), 2);
  CHECK(out[0] == doctest::Approx(1.0 * 0.25 + 2.0));
  CHECK(out[1] == doctest::Approx(-1.0 + 0.5));
  CHECK(out[2] == doctest::Approx(-1.0 - 6.0));
  CHECK(out[3] == doctest::Approx(-1.0 + 6.0));
}

TEST_CASE("grid convolutions give the same result with either table") {
  if (simd::avx2_kernels() == nullptr) return;
  const GridSpec spec{1, 24.0, 128};
  const GaussianMixture m({IsotropicGaussian(1.0, 2.0, {0.3, 0.0}, 1), IsotropicGaussian(0.4, 0.7, {-1.0, 0.0}, 1)});
  const GridField f = sample_mixture(m, spec);
  simd::set_active(simd::Isa::scalar);
  const GridField a = direct_convolve(f, f);
  const double na = grid_lp_norm(a, 2.0);
  simd::set_active(simd::Isa::avx2);
  const GridField b = direct_convolve(f, f);
  const double nb = grid_lp_norm(b, 2.0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
  CHECK(na == doctest::Approx(nb).epsilon(1e-14));
  simd::set_active(simd::detected_isa());
}

TEST_CASE("forcing avx2 is refused when unsupported") {
  if (simd::avx2_kernels() != nullptr) {
    CHECK_NOTHROW(simd::set_active(simd::Isa::avx2));
    simd::set_active(simd::detected_isa());
  } else {
    CHECK_THROWS_AS(simd::set_active(simd::Isa::avx2), std::runtime_error);
  }
}
