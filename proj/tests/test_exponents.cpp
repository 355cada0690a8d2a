#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "heatflow/exponents.hpp"

using namespace heatflow;
using doctest::Approx;

TEST_CASE("p is completed from the exponents") {
  CHECK(complete_p(std::vector<double>{4.0 / 3, 4.0 / 3}).p() == Approx(2.0).epsilon(1e-15));
  CHECK(complete_p(std::vector<double>{1.5, 1.5}).p() == Approx(3.0).epsilon(1e-15));
  CHECK(complete_p(std::vector<double>{4.0 / 3, 4.0 / 3, 4.0 / 3}).p() == Approx(4.0).epsilon(1e-15));
  CHECK(complete_p(std::vector<double>{2.0 / 3, 2.0 / 3}).p() == Approx(0.5).epsilon(1e-15));
  CHECK(complete_p(std::vector<double>{2.0 / 3, 2.0 / 3}).regime() == Regime::reverse);
  CHECK(complete_p(std::vector<double>{1.0, 2.0}).regime() == Regime::forward);
}

TEST_CASE("invalid exponent tuples") {
  CHECK_THROWS_WITH_AS(complete_p(std::vector<double>{0.8, 1.5}), "mixed exponent regime", std::invalid_argument);
  CHECK_THROWS_WITH_AS(complete_p(std::vector<double>{2.0, 2.0}), "p infinite or negative", std::invalid_argument);
  CHECK_THROWS_AS(complete_p(std::vector<double>{2.0}), std::invalid_argument);
  CHECK_THROWS_AS(ExponentTuple({4.0 / 3, 4.0 / 3}, 2.1), std::invalid_argument);
  CHECK_NOTHROW(ExponentTuple({4.0 / 3, 4.0 / 3}, 2.0));
}

TEST_CASE("canonical rates are balanced") {
  const auto t = complete_p(std::vector<double>{1.5, 1.2});
  const auto r = canonical_sigmas(t);
  CHECK(r.sigma[0] == Approx((1 - 1 / 1.5) / 1.5));
  CHECK(balance_residual(t, r) < 1e-15);
  CHECK(r.sigma_eff == Approx((r.sigma[0] * 1.5 + r.sigma[1] * 1.2) / t.p()));
  CHECK(canonical_sigmas(complete_p(std::vector<double>{1.0, 2.0})).sigma[0] == 0.0);
  const auto bad = make_rates(t, {0.1, 0.1});
  CHECK(balance_residual(t, bad) > 1e-3);
  CHECK_THROWS_AS(make_rates(t, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(make_rates(t, {0.1, -0.1}), std::invalid_argument);
}

TEST_CASE("sharp constants") {
  CHECK(sharp_constant(1.0) == 1.0);
  CHECK(sharp_constant(2.0) == Approx(1.0).epsilon(1e-15));
  CHECK(sharp_constant(4.0 / 3) == Approx(std::sqrt(std::pow(4.0 / 3, 0.75) / std::pow(4.0, 0.25))));
  CHECK_THROWS_AS(sharp_constant(0.0), std::invalid_argument);
}

TEST_CASE("young constants match high-precision values") {
  struct Case {
    std::vector<double> p;
    double value;
  };
  const Case cases[] = {
      {{4.0 / 3, 4.0 / 3}, 0.8773826753016616},
      {{1.5, 1.5}, 0.8660254037844386},
      {{2.0 / 3, 2.0 / 3}, 1.539600717839002},
      {{4.0 / 3, 4.0 / 3, 4.0 / 3}, 0.7698003589195010},
      {{1.5, 1.2}, 0.8857744022080895},
      {{1.0, 2.0}, 1.0},
  };
  for (const auto& c : cases) {
    const auto t = complete_p(c.p);
    CHECK(young_constant(t, 1) == Approx(c.value).epsilon(1e-14));
    CHECK(young_constant(t, 2) == Approx(c.value * c.value).epsilon(1e-14));
  }
}

TEST_CASE("coefficient identities hold for canonical rates") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> fwd(1.0, 3.0), rev(0.3, 1.0);
  for (int i = 0; i < 200; ++i) {
    const bool forward = i % 2 == 0;
    double p1 = forward ? fwd(rng) : rev(rng);
    double p2 = forward ? fwd(rng) : rev(rng);
    if (forward && 1 / p1 + 1 / p2 <= 1.05) continue;
    const auto t = complete_p(std::vector<double>{p1, p2});
    const auto r = verify_identities(t, canonical_sigmas(t));
    const double scale = 1.0 + std::abs(r.gradient_lhs) + std::abs(r.cross_lhs);
    CHECK(r.cross_residual() / scale < 1e-12);
    CHECK(r.gradient_residual() / scale < 1e-12);
  }
}

TEST_CASE("exact identities and the printed variant") {
  const Rational p1(4, 3), sigma(3, 16);
  const auto r = verify_identities_exact(p1, p1, sigma, sigma);
  CHECK(r.p == 2);
  CHECK(r.cross_holds);
  CHECK(r.gradient_holds);
  REQUIRE(r.sqrt_a1a2.has_value());
  CHECK(*r.printed_lhs == Rational(25, 64));
  CHECK(*r.printed_rhs == Rational(1, 2));

  const auto rev = verify_identities_exact(Rational(2, 3), Rational(2, 3), canonical_sigma_exact(Rational(2, 3)),
                                           canonical_sigma_exact(Rational(2, 3)));
  CHECK(rev.p == Rational(1, 2));
  CHECK(rev.cross_holds);
  CHECK(rev.gradient_holds);

  const auto wrong = verify_identities_exact(p1, p1, Rational(1, 8), Rational(3, 16));
  CHECK_FALSE(wrong.cross_holds);
  CHECK_THROWS_AS(verify_identities_exact(Rational(1, 2), Rational(3, 2), sigma, sigma), std::invalid_argument);
}

TEST_CASE("rational square roots") {
  CHECK(rational_sqrt(Rational(9, 64)) == Rational(3, 8));
  CHECK_FALSE(rational_sqrt(Rational(2)).has_value());
  CHECK_FALSE(rational_sqrt(Rational(-1, 4)).has_value());
  CHECK(canonical_sigma_exact(Rational(2, 3)) == Rational(3, 4));
}

TEST_CASE("weighted parameters") {
  const auto e = extended_params(1.0, 1.0, 0.75, 0.75, 2.0, 1);
  CHECK(e.sigma1 == Approx(0.25));
  CHECK(e.sigma2 == Approx(0.25));
  CHECK(e.beta == Approx(0.25));
  CHECK(e.lambda1 == Approx(0.25));
  CHECK(e.lambda1 + e.lambda2 <= 1.0 + 1e-15);
  CHECK(weighted_balance_residual(e) < 1e-15);
  CHECK(extended_params(1.0, 1.0, 0.75, 0.75, 2.0, 2).beta == Approx(0.5));

  const auto unweighted = extended_params(0.75, 0.75, 1.0, 1.0, 2.0, 1);
  CHECK(std::abs(unweighted.beta) < 1e-15);
  CHECK(unweighted.sigma1 == Approx(0.1875));

  CHECK_THROWS_AS(extended_params(1.0, 1.0, 0.5, 0.5, 2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(extended_params(1.2, 1.0, 0.75, 0.75, 2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(extended_params(1.0, 1.0, 0.75, 0.75, 0.5, 1), std::invalid_argument);
}
