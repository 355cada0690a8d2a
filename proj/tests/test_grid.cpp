#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "heatflow/grid.hpp"
#include "heatflow/grid_plan.hpp"

using namespace heatflow;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;

TEST_CASE("grid spec validation and node layout") {
  const GridSpec s{1, 8.0, 16};
  CHECK_NOTHROW(s.validate());
  CHECK(s.coordinate(0) == -4.0);
  CHECK(s.coordinate(8) == 0.0);
  CHECK_THROWS_AS((GridSpec{1, 8.0, 24}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{1, 8.0, 8}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{3, 8.0, 16}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{1, -1.0, 16}.validate()), std::invalid_argument);
  const GridSpec two{2, 4.0, 16};
  CHECK(two.size() == 256);
  CHECK(two.node(8 * 16 + 8) == Point{0.0, 0.0});
  CHECK(two.node(8 * 16 + 9)[1] == Approx(0.25));
  CHECK(two.cell_volume() == Approx(1.0 / 16));
}

TEST_CASE("Lp norms of sampled Gaussians match quadrature") {
  const GaussianMixture g({IsotropicGaussian(0.7, 1.3, {0.2, 0.0}, 1)});
  const GridField f = sample_mixture(g, GridSpec{1, 24.0, 256});
  CHECK(grid_lp_norm(f, 1.7) == Approx(0.776294922527763647840).epsilon(1e-13));
  const GaussianMixture g2({IsotropicGaussian(0.7, 1.3, {0.0, 0.0}, 2)});
  const GridField f2 = sample_mixture(g2, GridSpec{2, 24.0, 128});
  CHECK(grid_lp_norm(f2, 0.6) == Approx(7.13712807213164102467).epsilon(1e-12));
}

TEST_CASE("convolutions match the closed form") {
  const GridSpec s{1, 32.0, 512};
  const GaussianMixture a({IsotropicGaussian(0.7, 1.3, {0.2, 0.0}, 1)});
  const GaussianMixture b({IsotropicGaussian(1.1, 0.4, {-0.5, 0.0}, 1)});
  const GridField fa = sample_mixture(a, s), fb = sample_mixture(b, s);
  const GridField c1 = fft_convolve(fa, fb);
  const GridField c2 = direct_convolve(fa, fb);
  // Node nearest x = 0.9 on spacing 1/16: 0.875, use the closed form there.
  const IsotropicGaussian exact = convolve_gaussians(a.terms()[0], b.terms()[0]);
  std::size_t node = static_cast<std::size_t>((0.9 + 16.0) * 16.0);
  CHECK(c1[node] == Approx(exact(s.node(node))).epsilon(1e-13));
  CHECK(c2[node] == Approx(exact(s.node(node))).epsilon(1e-13));
  CHECK(exact({0.9, 0.0}) == Approx(0.673825209373614832946).epsilon(1e-14));
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(c1[i] - c2[i]) < 1e-14);
}

TEST_CASE("direct convolution keeps tail accuracy") {
  const GridSpec s{1, 40.0, 512};
  const GaussianMixture a({IsotropicGaussian(1.0, 1.0, {0.0, 0.0}, 1)});
  const GridField f = sample_mixture(a, s);
  const GridField c = direct_convolve(f, f);
  const IsotropicGaussian exact = convolve_gaussians(a.terms()[0], a.terms()[0]);
  // exp(-x^2 / 2) at x = 10 is 2e-22, far below FFT round-off.
  const std::size_t node = static_cast<std::size_t>((10.0 + 20.0) / s.spacing());
  CHECK(c[node] == Approx(exact(s.node(node))).epsilon(1e-12));
}

TEST_CASE("two-dimensional convolution") {
  const GridSpec s{2, 16.0, 64};
  const GaussianMixture a({IsotropicGaussian(1.0, 1.5, {0.5, -0.25}, 2)});
  const GaussianMixture b({IsotropicGaussian(0.5, 0.8, {-0.25, 0.5}, 2)});
  const GridField c = fft_convolve(sample_mixture(a, s), sample_mixture(b, s));
  const IsotropicGaussian exact = convolve_gaussians(a.terms()[0], b.terms()[0]);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(c[i] - exact(s.node(i))));
  CHECK(worst < 1e-13);
  CHECK(c.mass() == Approx(exact.mass()).epsilon(1e-13));
}

TEST_CASE("negative and ill-fitting input is rejected") {
  const GridSpec s{1, 8.0, 32};
  std::vector<double> v(32, 1.0);
  v[3] = -0.5;
  const GridField neg(s, v);
  const GridField one = GridField::constant(s, 1.0);
  CHECK_THROWS_AS(fft_convolve(neg, one), std::invalid_argument);
  CHECK_NOTHROW(fft_convolve_signed(neg, one));
  CHECK_THROWS_AS(grid_lp_norm(neg, 2.0), std::domain_error);
  CHECK_THROWS_AS(pointwise_power(neg, 0.5), std::domain_error);
  CHECK_THROWS_AS(GridField(s, std::vector<double>(5)), std::invalid_argument);
  CHECK_THROWS_AS(fft_convolve(one, GridField::constant(GridSpec{1, 8.0, 64}, 1.0)), std::invalid_argument);
  const GaussianMixture wide({IsotropicGaussian(1.0, 0.05, {0.0, 0.0}, 1)});
  CHECK_THROWS_WITH_AS(sample_mixture(wide, s), "domain too small for support", std::domain_error);
  CHECK_FALSE(fits_in_domain(wide, s));
  CHECK(fits_in_domain(wide, GridSpec{1, minimal_period(wide) * 1.001, 32}));
}

TEST_CASE("zero entries are allowed") {
  const GridSpec s{1, 8.0, 32};
  const GridField z = GridField::constant(s, 0.0);
  CHECK(grid_lp_norm(z, 0.5) == 0.0);
  CHECK(fft_convolve(z, z).max_abs() == 0.0);
}

TEST_CASE("heat step matches the exact flow") {
  const GridSpec s{1, 24.0, 256};
  const GaussianMixture m({IsotropicGaussian(1.0, 2.0, {0.5, 0.0}, 1), IsotropicGaussian(0.3, 0.5, {-1.0, 0.0}, 1)});
  const GridField stepped = heat_step(sample_mixture(m, s), 0.4, 1.5);
  const GridField exact = sample_mixture(evolve_mixture(m, 0.4, 1.5), s);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(stepped[i] - exact[i]) < 1e-14);
  CHECK_THROWS_AS(heat_step(exact, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("spectral derivatives match the analytic jet") {
  for (int d : {1, 2}) {
    CAPTURE(d);
    const GridSpec s{d, 16.0, d == 1 ? 256u : 64u};
    const GaussianMixture m({IsotropicGaussian(1.0, 1.2, {0.3, -0.2}, d), IsotropicGaussian(0.6, 0.7, {-0.8, 0.4}, d)});
    const GridField f = sample_mixture(m, s);
    const auto der = spectral_grad_laplacian(f);
    const GridField ll = spectral_log_laplacian(f);
    REQUIRE(der.gradient.size() == static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < s.size(); i += 7) {
      const Point x = s.node(i);
      const auto jet = m.jet(x);
      CHECK(std::abs(der.laplacian[i] - jet.laplacian) < 1e-11);
      CHECK(std::abs(der.gradient[0][i] - jet.gradient[0]) < 1e-11);
      if (norm(x, d) < 3.0) CHECK(ll[i] == Approx(m.log_laplacian(x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("fourier modulus of a Gaussian") {
  // |FT(exp(-pi x^2 / t))|(xi) = t^{1/2} exp(-pi t xi^2).
  const GridSpec s{1, 32.0, 256};
  const double t = 0.7;
  const GaussianMixture m({IsotropicGaussian(1.0, kPi / t, {0.75, 0.0}, 1)});
  const auto mod = fourier_modulus(sample_mixture(m, s));
  REQUIRE(mod.size() == s.size());
  for (std::size_t k = 0; k < 20; ++k) {
    const double xi = static_cast<double>(k) / s.period;
    CHECK(std::abs(mod[k] - std::sqrt(t) * std::exp(-kPi * t * xi * xi)) < 1e-14);
  }
}

TEST_CASE("naive DFT agrees with the FFT modulus") {
  const GridSpec s{1, 8.0, 32};
  const GridField f = sample(s, [](const Point& x) { return std::exp(-x[0] * x[0]) * (1.2 + std::cos(x[0])); });
  const auto mod = fourier_modulus(f);
  for (std::size_t k = 0; k < s.points; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < s.points; ++j)
      acc += f[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>(j * k) / static_cast<double>(s.points));
    CHECK(std::abs(mod[k] - s.spacing() * std::abs(acc)) < 1e-14);
  }
}

TEST_CASE("field dump format") {
  const GridField f = GridField::constant(GridSpec{1, 8.0, 16}, 2.0);
  const std::string csv = field_csv(f, "flat");
  CHECK(csv.rfind("# experiment=flat\n", 0) == 0);
  CHECK(csv.find("x,value\n") != std::string::npos);
  CHECK(csv.find("-4,2\n") != std::string::npos);
}

TEST_CASE("grid planner resolves and contains the flows") {
  const std::vector<HeatFlow> flows{
      {AtomicMeasure({{{-0.7, 0.0}, 1.0}, {{0.9, 0.0}, 0.6}}, 1), 0.1875},
      {AtomicMeasure({{{0.3, 0.0}, 0.8}}, 1), 0.1875},
  };
  const std::vector<double> powers{0.75, 0.75};
  const GridSpec g = plan_grid(flows, powers, 2.0, 0.1, 10.0);
  CHECK(g.dim == 1);
  CHECK_NOTHROW(g.validate());
  for (const auto& f : flows) CHECK(fits_in_domain(f.at(10.0), g));
  GridPlanOptions tight;
  tight.max_points = 64;
  CHECK_THROWS_AS(plan_grid(flows, powers, 2.0, 1e-4, 10.0, tight), std::domain_error);
}
