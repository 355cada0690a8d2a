#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "heatflow/functionals.hpp"
#include "heatflow/monotonicity.hpp"

using namespace heatflow;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<FlowDatum> pair_data() {
  return {AtomicMeasure({{{-0.7, 0.0}, 1.0}, {{0.9, 0.0}, 0.6}}, 1), AtomicMeasure({{{0.3, 0.0}, 0.8}}, 1)};
}

}  // namespace

TEST_CASE("Q of a two-atom pair matches quadrature") {
  const auto tuple = complete_p(std::vector<double>{4.0 / 3, 4.0 / 3});
  const auto rates = canonical_sigmas(tuple);
  const auto data = pair_data();
  const std::vector<double> times{1.0};
  const QCurve c = q_curve(data, tuple, rates, 0.0, times, GridSpec{1, 32.0, 1024});
  CHECK(c.values[0] == Approx(0.89836592519354195085).epsilon(1e-12));
  const QCurve d = q_curve(data, tuple, rates, 0.0, times, GridSpec{1, 32.0, 1024}, ConvolutionMethod::direct);
  CHECK(d.values[0] == Approx(c.values[0]).epsilon(1e-13));
}

TEST_CASE("Q is nondecreasing along the flow") {
  const auto tuple = complete_p(std::vector<double>{4.0 / 3, 4.0 / 3});
  const auto data = pair_data();
  const auto times = log_spaced(0.05, 20.0, 24);
  const QCurve c = q_curve(data, tuple, canonical_sigmas(tuple), 0.0, times, GridSpec{1, 48.0, 2048});
  CHECK(check_monotone(c.values, 1, 1e-10).pass);
  // Large-time limit approaches the Young bound.
  const double bound = young_constant(tuple, 1) * std::pow(1.6 * 0.8, 0.75);
  CHECK(c.values.back() <= bound * (1 + 1e-12));
  CHECK(c.values.back() > 0.95 * bound);
}

TEST_CASE("closed-form Q is flat for matched Gaussians") {
  // Centered Gaussians whose covariances are in the extremal ratio stay extremal.
  const auto tuple = complete_p(std::vector<double>{1.5, 1.2});
  const auto rates = canonical_sigmas(tuple);
  const std::vector<FlowDatum> data{AtomicMeasure({{{0.25, 0.0}, 1.0}}, 1), AtomicMeasure({{{0.25, 0.0}, 2.0}}, 1)};
  const auto times = log_spaced(0.01, 100.0, 16);
  const QCurve c = q_curve_oracle(data, tuple, rates, 0.0, times);
  CHECK(relative_variation(c.values) < 1e-13);
  CHECK(c.values.front() == Approx(young_constant(tuple, 1) * std::pow(1.0, 1 / 1.5) * std::pow(2.0, 1 / 1.2)));
}

TEST_CASE("closed form agrees with the grid") {
  const auto tuple = complete_p(std::vector<double>{4.0 / 3, 4.0 / 3});
  const auto rates = canonical_sigmas(tuple);
  const std::vector<FlowDatum> data{GaussianMixture({IsotropicGaussian(1.0, 2.0, {0.2, 0.0}, 1)}),
                                    GaussianMixture({IsotropicGaussian(0.5, 0.7, {-0.4, 0.0}, 1)})};
  const std::vector<double> times{0.1, 1.0, 5.0};
  const QCurve o = q_curve_oracle(data, tuple, rates, 0.0, times);
  const QCurve g = q_curve(data, tuple, rates, 0.0, times, GridSpec{1, 40.0, 512});
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(g.values[i] == Approx(o.values[i]).epsilon(1e-12));
  const std::vector<FlowDatum> mixed{GaussianMixture({IsotropicGaussian(1.0, 2.0, {0, 0}, 1),
                                                      IsotropicGaussian(1.0, 2.0, {1, 0}, 1)}),
                                     data[1]};
  CHECK_THROWS_AS(q_curve_oracle(mixed, tuple, rates, 0.0, times), std::invalid_argument);
}

TEST_CASE("reverse regime is nonincreasing") {
  const auto tuple = complete_p(std::vector<double>{2.0 / 3, 2.0 / 3});
  const std::vector<FlowDatum> data{
      GaussianMixture({IsotropicGaussian(1.0, 3.0, {-0.5, 0}, 1), IsotropicGaussian(0.7, 2.0, {0.6, 0}, 1)}),
      GaussianMixture({IsotropicGaussian(0.9, 2.5, {0.1, 0}, 1)})};
  const auto times = log_spaced(0.1, 5.0, 10);
  const QCurve c = q_curve(data, tuple, canonical_sigmas(tuple), 0.0, times, GridSpec{1, 32.0, 256});
  CHECK(check_monotone(c.values, -1, 1e-10).pass);
}

TEST_CASE("too small a domain names the minimal period") {
  const auto tuple = complete_p(std::vector<double>{4.0 / 3, 4.0 / 3});
  const std::vector<double> times{100.0};
  try {
    q_curve(pair_data(), tuple, canonical_sigmas(tuple), 0.0, times, GridSpec{1, 8.0, 256});
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("minimal admissible L") != std::string::npos);
  }
}

TEST_CASE("Hausdorff-Young functional matches a naive Plancherel sum") {
  const GridSpec s{1, 16.0, 128};
  const GaussianMixture m({IsotropicGaussian(1.0, 1.5, {-0.5, 0}, 1), IsotropicGaussian(0.4, 0.9, {0.8, 0}, 1)});
  const GridField u = sample_mixture(m, s);
  const int p = 4;
  const GridField f = pointwise_power(u, 0.75);
  double sum = 0.0;
  for (std::size_t k = 0; k < s.points; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < s.points; ++j)
      acc += f[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>(j * k) / static_cast<double>(s.points));
    sum += std::pow(s.spacing() * std::abs(acc), p);
  }
  const double naive = std::pow(sum / s.period, 1.0 / p);
  CHECK(hausdorff_young_value(u, p) == Approx(naive).epsilon(1e-12));
  CHECK(hausdorff_young_fourier(u, p) == Approx(naive).epsilon(1e-12));
  CHECK_THROWS_AS(hausdorff_young_value(u, 3), std::invalid_argument);
}

TEST_CASE("endpoint limits") {
  const auto tuple = complete_p(std::vector<double>{4.0 / 3, 4.0 / 3});
  const std::vector<GaussianMixture> dens{GaussianMixture({IsotropicGaussian(1.0, 2.0, {0.3, 0}, 1)}),
                                          GaussianMixture({IsotropicGaussian(1.0, 0.5, {-0.2, 0}, 1)})};
  const EndpointLimits e = endpoint_limits(dens, tuple, GridSpec{1, 32.0, 512});
  CHECK(e.q_zero <= e.q_infinity);
  CHECK(e.q_infinity == Approx(young_constant(tuple, 1) * std::pow(dens[0].mass() * dens[1].mass(), 0.75)));
}

TEST_CASE("time grids and monotone checks") {
  const auto t = log_spaced(0.01, 100.0, 5);
  CHECK(t.front() == 0.01);
  CHECK(t.back() == 100.0);
  CHECK(t[2] == Approx(1.0));
  CHECK(linear_spaced(1.0, 2.0, 3)[1] == 1.5);
  CHECK_THROWS_AS(log_spaced(0.0, 1.0, 4), std::invalid_argument);
  const std::vector<double> v{1.0, 2.0, 1.999, 3.0};
  const auto c = check_monotone(v, 1, 1e-6);
  CHECK_FALSE(c.pass);
  CHECK(c.index == 1);
  CHECK(check_monotone(v, 1, 1e-3).pass);
  CHECK(relative_variation(std::vector<double>{2.0, 2.0}) == 0.0);
}

TEST_CASE("three-point derivative of a flat curve is zero") {
  QCurve c;
  c.times = {0.5, 1.0, 3.0};
  c.values = {2.0, 2.0, 2.0};
  CHECK(numeric_dqdt(c, 1) == 0.0);
  CHECK_THROWS_AS(numeric_dqdt(c, 0), std::out_of_range);
  c.values = {0.25, 1.0, 9.0};  // t^2 is exact under the three-point rule
  CHECK(numeric_dqdt(c, 1) == Approx(2.0));
}

TEST_CASE("curve csv") {
  const auto tuple = complete_p(std::vector<double>{4.0 / 3, 4.0 / 3});
  const std::vector<double> times{1.0, 2.0};
  QCurve c = q_curve(pair_data(), tuple, canonical_sigmas(tuple), 0.0, times, GridSpec{1, 32.0, 256});
  c.name = "pair";
  const std::string csv = qcurve_csv(c, "name=pair");
  CHECK(csv.rfind("# experiment=pair n=2 p=", 0) == 0);
  CHECK(csv.find("# config: name=pair\nt,Q\n1,") != std::string::npos);
}
