#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heatflow/gaussian.hpp"

using namespace heatflow;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;

TEST_CASE("heat kernel has unit mass and the closed-form value") {
  for (int d : {1, 2}) {
    for (double t : {1e-3, 0.3, 1.0, 50.0}) CHECK(heat_kernel(t, d).mass() == Approx(1.0).epsilon(1e-14));
  }
  // Values from 30-digit quadrature.
  CHECK(heat_kernel(0.3, 1)({0.5, 0.0}) == Approx(0.133186153920000044588).epsilon(1e-14));
  CHECK(heat_kernel(0.3, 2)({0.5, 0.0}) == Approx(0.243163536164463765347).epsilon(1e-14));
  CHECK(heat_kernel(0.3, 2)({0.3, 0.4}) == Approx(0.243163536164463765347).epsilon(1e-14));
}

TEST_CASE("invalid Gaussians are rejected") {
  CHECK_THROWS_AS(IsotropicGaussian(0.0, 1.0, {0, 0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(IsotropicGaussian(1.0, -1.0, {0, 0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(IsotropicGaussian(1.0, 1.0, {0, 0}, 3), std::invalid_argument);
  CHECK_THROWS_AS(heat_kernel(0.0, 1), std::invalid_argument);
}

TEST_CASE("L^p norms match quadrature") {
  const IsotropicGaussian g(0.7, 1.3, {0.2, 0.0}, 1);
  CHECK(gaussian_lp_norm(g, 1.7) == Approx(0.776294922527763647840).epsilon(1e-14));
  const IsotropicGaussian g2(0.7, 1.3, {0.0, 0.0}, 2);
  CHECK(gaussian_lp_norm(g2, 0.6) == Approx(7.13712807213164102467).epsilon(1e-14));
  CHECK(gaussian_lp_norm(g, 1.0) == Approx(g.mass()).epsilon(1e-15));
}

TEST_CASE("convolution of Gaussians") {
  const IsotropicGaussian a(0.7, 1.3, {0.2, 0.0}, 1), b(1.1, 0.4, {-0.5, 0.0}, 1);
  const IsotropicGaussian c = convolve_gaussians(a, b);
  CHECK(c({0.9, 0.0}) == Approx(0.673825209373614832946).epsilon(1e-14));
  CHECK(c.mass() == Approx(a.mass() * b.mass()).epsilon(1e-14));
  CHECK(c.center()[0] == Approx(-0.3));
  // Semigroup: H_s * H_t = H_{s+t}.
  const IsotropicGaussian h = convolve_gaussians(heat_kernel(0.2, 2), heat_kernel(0.5, 2));
  CHECK(h.decay() == Approx(kPi / 0.7));
  CHECK(h.amplitude() == Approx(1.0 / 0.7));
}

TEST_CASE("power of a Gaussian") {
  const IsotropicGaussian g(2.0, 1.5, {0.1, 0.0}, 1);
  const IsotropicGaussian p = gaussian_power(g, 0.75);
  for (double x : {-1.0, 0.0, 0.4, 2.0}) CHECK(p({x, 0.0}) == Approx(std::pow(g({x, 0.0}), 0.75)).epsilon(1e-14));
}

TEST_CASE("mixture derivatives match high-precision values") {
  const GaussianMixture u({IsotropicGaussian(0.5, 2.0, {0, 0}, 1), IsotropicGaussian(0.8, 1.0, {1.0, 0.0}, 1)});
  CHECK(u.log_laplacian({0.3, 0.0}) == Approx(-1.24093893288692404112).epsilon(1e-13));
  CHECK(u.log_gradient({0.3, 0.0})[0] == Approx(0.203781043820380918235).epsilon(1e-13));
  const auto jet = u.jet({0.3, 0.0});
  CHECK(jet.value == Approx(u({0.3, 0.0})));
  CHECK(jet.laplacian == Approx(u.laplacian({0.3, 0.0})));
}

TEST_CASE("log derivatives stay finite deep in the tails") {
  const GaussianMixture u({IsotropicGaussian(1.0, 3.0, {-1.0, 0}, 1), IsotropicGaussian(1.0, 3.0, {1.0, 0.0}, 1)});
  // Far to the right the right-hand term dominates: log-gradient -> -6 (x - 1).
  const Point x{30.0, 0.0};
  CHECK(u(x) == 0.0);
  CHECK(u.log_gradient(x)[0] == Approx(-6.0 * 29.0).epsilon(1e-12));
  CHECK(u.log_laplacian(x) == Approx(-6.0).epsilon(1e-9));
}

TEST_CASE("atomic flows and mixture flows") {
  const AtomicMeasure mu({{{0.5, 0.0}, 2.0}, {{-1.0, 0.0}, 1.0}}, 1);
  CHECK(mu.mass() == 3.0);
  CHECK(mu.support_radius() == 1.0);
  const GaussianMixture u = evolve_atoms(mu, 0.25, 2.0);
  CHECK(u.mass() == Approx(3.0));
  CHECK(u({0.5, 0.0}) == Approx(2.0 * heat_kernel(0.5, 1)({0, 0}) + heat_kernel(0.5, 1)({1.5, 0})));
  CHECK_THROWS_AS(evolve_atoms(mu, 0.0, 1.0), std::invalid_argument);

  const GaussianMixture g({heat_kernel(0.3, 1)});
  const GaussianMixture moved = evolve_mixture(g, 2.0, 0.1);
  CHECK(moved.terms().front().decay() == Approx(kPi / 0.5));
  CHECK(evolve_mixture(g, 0.0, 5.0).terms().front().decay() == g.terms().front().decay());

  const HeatFlow flow{mu, 0.5};
  CHECK(flow.at(1.0)({0.0, 0.0}) == Approx(evolve_atoms(mu, 0.5, 1.0)({0.0, 0.0})));
  CHECK(is_atomic(flow.initial));
  CHECK(datum_radius(flow.initial) == 1.0);
  CHECK(datum_mass(flow.initial) == 3.0);
}

TEST_CASE("mixture flow solves the heat equation") {
  const GaussianMixture m({IsotropicGaussian(0.9, 2.0, {0.1, -0.2}, 2), IsotropicGaussian(0.4, 0.6, {-0.8, 0.5}, 2)});
  const double sigma = 0.7, t = 0.9, dt = 1e-5;
  const HeatFlow f{m, sigma};
  const Point x{0.3, 0.2};
  const double dudt = (f.at(t + dt)(x) - f.at(t - dt)(x)) / (2 * dt);
  CHECK(dudt == Approx(sigma / (4 * kPi) * f.at(t).laplacian(x)).epsilon(1e-7));
}

TEST_CASE("mixed dimensions and empty mixtures are rejected") {
  CHECK_THROWS_AS(GaussianMixture({}), std::invalid_argument);
  CHECK_THROWS_AS(GaussianMixture({heat_kernel(1.0, 1), heat_kernel(1.0, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(AtomicMeasure({{{0.0, 0.0}, -1.0}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(AtomicMeasure({{{2.0, 0.0}, 1.0}}, 1, 1.0), std::invalid_argument);
}
