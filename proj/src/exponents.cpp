#include "heatflow/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace heatflow {

namespace {

constexpr double kRelationTol = 1e-12;

Regime classify(std::span<const double> p_list) {
  const bool all_ge = std::all_of(p_list.begin(), p_list.end(), [](double q) { return q >= 1.0; });
  if (all_ge) return Regime::forward;
  const bool all_le = std::all_of(p_list.begin(), p_list.end(), [](double q) { return q <= 1.0; });
  if (all_le) return Regime::reverse;
  throw std::invalid_argument("mixed exponent regime");
}

void check_list(std::span<const double> p_list) {
  if (p_list.size() < 2) throw std::invalid_argument("need at least two exponents");
  for (double q : p_list) {
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("exponents must be positive and finite");
  }
}

double inverse_sum(std::span<const double> p_list) {
  double s = 0.0;
  for (double q : p_list) s += 1.0 / q;
  return s;
}

}  // namespace

ExponentTuple::ExponentTuple(std::vector<double> p_list, double p) : p_list_(std::move(p_list)), p_(p) {
  check_list(p_list_);
  regime_ = classify(p_list_);
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("p infinite or negative");
  const double n = static_cast<double>(p_list_.size());
  const double gap = inverse_sum(p_list_) - (n - 1.0) - 1.0 / p;
  if (std::abs(gap) > kRelationTol) {
    throw std::invalid_argument("exponents violate the scaling relation (gap " + std::to_string(gap) + ")");
  }
}

ExponentTuple complete_p(std::span<const double> p_list) {
  check_list(p_list);
  classify(p_list);
  const double inv_p = inverse_sum(p_list) - static_cast<double>(p_list.size() - 1);
  if (!(inv_p > 0.0)) throw std::invalid_argument("p infinite or negative");
  return ExponentTuple(std::vector<double>(p_list.begin(), p_list.end()), 1.0 / inv_p);
}

DiffusionRates make_rates(const ExponentTuple& tuple, std::vector<double> sigma) {
  if (sigma.size() != tuple.folds()) throw std::invalid_argument("one diffusion rate per exponent required");
  double acc = 0.0;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    if (sigma[j] < 0.0 || !std::isfinite(sigma[j])) throw std::invalid_argument("diffusion rates must be nonnegative");
    acc += sigma[j] * tuple.p_list()[j];
  }
  return DiffusionRates{std::move(sigma), acc / tuple.p()};
}

DiffusionRates canonical_sigmas(const ExponentTuple& tuple) {
  std::vector<double> sigma;
  sigma.reserve(tuple.folds());
  for (double q : tuple.p_list()) sigma.push_back(std::abs(1.0 - 1.0 / q) / q);
  return make_rates(tuple, std::move(sigma));
}

double balance_residual(const ExponentTuple& tuple, const DiffusionRates& rates) {
  const auto& ps = tuple.p_list();
  double worst = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    for (std::size_t k = j + 1; k < ps.size(); ++k) {
      const double lhs = (1.0 / ps[j]) * (1.0 - 1.0 / ps[j]) * rates.sigma[k];
      const double rhs = (1.0 / ps[k]) * (1.0 - 1.0 / ps[k]) * rates.sigma[j];
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double sharp_constant(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("sharp_constant: r must be positive");
  if (r == 1.0 || std::isinf(r)) return 1.0;
  const double inv_conj = (r - 1.0) / r;  // 1/r'
  const double conj = r / (r - 1.0);
  return std::sqrt(std::pow(r, 1.0 / r) / std::pow(std::abs(conj), inv_conj));
}

double young_constant(const ExponentTuple& tuple, int dim) {
  double c = 1.0;
  for (double q : tuple.p_list()) c *= sharp_constant(q);
  return std::pow(c / sharp_constant(tuple.p()), dim);
}

double IdentityReport::cross_residual() const { return std::abs(cross_lhs - cross_rhs); }
double IdentityReport::gradient_residual() const { return std::abs(gradient_lhs - gradient_rhs); }

IdentityReport verify_identities(const ExponentTuple& tuple, const DiffusionRates& rates) {
  if (tuple.folds() != 2) throw std::invalid_argument("verify_identities needs a two-fold tuple");
  const double p1 = tuple.p_list()[0], p2 = tuple.p_list()[1], p = tuple.p();
  const double s1 = rates.sigma[0], s2 = rates.sigma[1];
  const double eps = tuple.epsilon();
  const double a1 = (p * s1 / p1) * std::abs(1.0 - 1.0 / p1);
  const double a2 = (p * s2 / p2) * std::abs(1.0 - 1.0 / p2);
  const double root = 2.0 * std::sqrt(a1) * std::sqrt(a2);

  IdentityReport r{};
  r.cross_lhs = root;
  r.cross_rhs = eps * (s1 * (p - p1) + s2 * (p - p2)) / (p1 * p2);
  r.gradient_lhs = (p - 1.0) * (s1 * p1 + s2 * p2);
  r.gradient_rhs = p * s1 * (p1 - 1.0) + p * s2 * (p2 - 1.0) + eps * p1 * p2 * root;
  r.printed_lhs = p * s1 * (p1 - 1.0) + p * s2 * (p2 - 1.0) + root;
  r.printed_rhs = r.gradient_lhs;
  return r;
}

std::optional<Rational> rational_sqrt(const Rational& x) {
  using boost::multiprecision::cpp_int;
  if (x < 0) return std::nullopt;
  const cpp_int num = boost::multiprecision::numerator(x);
  const cpp_int den = boost::multiprecision::denominator(x);
  const cpp_int rn = boost::multiprecision::sqrt(num);
  const cpp_int rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

Rational canonical_sigma_exact(const Rational& pj) {
  Rational g = 1 - 1 / pj;
  if (g < 0) g = -g;
  return g / pj;
}

ExactIdentityReport verify_identities_exact(const Rational& p1, const Rational& p2, const Rational& sigma1,
                                            const Rational& sigma2) {
  if (p1 <= 0 || p2 <= 0) throw std::invalid_argument("exponents must be positive");
  const bool forward = p1 >= 1 && p2 >= 1;
  const bool reverse = p1 <= 1 && p2 <= 1;
  if (!forward && !reverse) throw std::invalid_argument("mixed exponent regime");
  const Rational inv_p = 1 / p1 + 1 / p2 - 1;
  if (inv_p <= 0) throw std::invalid_argument("p infinite or negative");
  const Rational p = 1 / inv_p;
  const int eps = forward ? 1 : -1;

  auto abs_r = [](Rational v) { return v < 0 ? Rational(-v) : v; };
  const Rational a1 = (p * sigma1 / p1) * abs_r(1 - 1 / p1);
  const Rational a2 = (p * sigma2 / p2) * abs_r(1 - 1 / p2);
  const Rational prod = a1 * a2;

  ExactIdentityReport r;
  r.p = p;

  const Rational cross = (sigma1 * (p - p1) + sigma2 * (p - p2)) / (p1 * p2);
  r.cross_holds = (4 * prod == cross * cross) && (eps * cross >= 0);

  const Rational g = (p - 1) * (sigma1 * p1 + sigma2 * p2) - p * sigma1 * (p1 - 1) - p * sigma2 * (p2 - 1);
  r.gradient_holds = (g * g == 4 * p1 * p1 * p2 * p2 * prod) && (eps * g >= 0);

  r.sqrt_a1a2 = rational_sqrt(prod);
  if (r.sqrt_a1a2) {
    r.printed_lhs = p * sigma1 * (p1 - 1) + p * sigma2 * (p2 - 1) + 2 * *r.sqrt_a1a2;
    r.printed_rhs = (p - 1) * (sigma1 * p1 + sigma2 * p2);
  }
  return r;
}

ExtendedParams extended_params(double alpha1, double alpha2, double rho1, double rho2, double p, int dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
  auto in_unit = [](double v, bool open_low) { return (open_low ? v > 0.0 : v >= 0.0) && v <= 1.0; };
  if (!in_unit(alpha1, true) || !in_unit(alpha2, true)) throw std::invalid_argument("alpha_j must lie in (0,1]");
  if (!in_unit(rho1, false) || !in_unit(rho2, false)) throw std::invalid_argument("rho_j must lie in [0,1]");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("weighted functional needs 1 <= p < inf");
  const double target = 1.0 + 1.0 / p;
  if (std::abs(rho1 * alpha1 + rho2 * alpha2 - target) > kRelationTol) {
    throw std::invalid_argument("weights violate rho_1 alpha_1 + rho_2 alpha_2 = 1 + 1/p");
  }
  if (alpha1 + alpha2 < target - kRelationTol) throw std::invalid_argument("alpha_1 + alpha_2 < 1 + 1/p");

  ExtendedParams e{};
  e.alpha1 = alpha1;
  e.alpha2 = alpha2;
  e.rho1 = rho1;
  e.rho2 = rho2;
  e.p = p;
  e.dim = dim;
  e.sigma1 = alpha1 * (1.0 - rho1 * alpha1);
  e.sigma2 = alpha2 * (1.0 - rho2 * alpha2);
  e.sigma_eff = (e.sigma1 / alpha1 + e.sigma2 / alpha2) / p;
  e.beta = dim * (alpha1 + alpha2 - 1.0 - 1.0 / p) / 2.0;
  const double denom = 2.0 - rho1 * alpha1 - rho2 * alpha2;
  if (denom > 0.0) {
    e.lambda1 = std::pow((1.0 - rho1 * alpha1) / denom, 2);
    e.lambda2 = std::pow((1.0 - rho2 * alpha2) / denom, 2);
  } else {
    // rho_j alpha_j = 1 for both: every split with sqrt sum 1 works.
    e.lambda1 = e.lambda2 = 0.25;
  }
  return e;
}

double weighted_balance_residual(const ExtendedParams& e) {
  return std::abs(e.alpha1 * (1.0 - e.rho1 * e.alpha1) * e.sigma2 - e.alpha2 * (1.0 - e.rho2 * e.alpha2) * e.sigma1);
}

}  // namespace heatflow
