#pragma once

// Exponent and diffusion-rate algebra for fractional-power convolutions
//
//   Q(t) = t^beta || u_1^{1/p_1} * ... * u_n^{1/p_n} ||_p
//
// with sum_j 1/p_j = n - 1 + 1/p, diffusion rates balanced so that
// (1/p_j)(1 - 1/p_j) sigma_k = (1/p_k)(1 - 1/p_k) sigma_j, and the sharp
// Young constant (prod_j C_{p_j} / C_p)^d.

#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace heatflow {

/// +1 when every p_j >= 1 (Young), -1 when every p_j <= 1 (reverse Young).
enum class Regime : int { forward = 1, reverse = -1 };

inline int sign(Regime r) { return static_cast<int>(r); }

class ExponentTuple {
 public:
  /// Validates the scaling relation to 1e-12 and the regime. Throws
  /// std::invalid_argument on failure.
  ExponentTuple(std::vector<double> p_list, double p);

  const std::vector<double>& p_list() const { return p_list_; }
  double p() const { return p_; }
  Regime regime() const { return regime_; }
  int epsilon() const { return sign(regime_); }
  std::size_t folds() const { return p_list_.size(); }

 private:
  std::vector<double> p_list_;
  double p_;
  Regime regime_;
};

/// Solves the scaling relation for p. Errors: "mixed exponent regime",
/// "p infinite or negative".
ExponentTuple complete_p(std::span<const double> p_list);

struct DiffusionRates {
  std::vector<double> sigma;
  double sigma_eff;
};

/// sigma_eff = (sum_j sigma_j p_j) / p for arbitrary (possibly unbalanced) rates.
DiffusionRates make_rates(const ExponentTuple& tuple, std::vector<double> sigma);

/// sigma_j = |1 - 1/p_j| / p_j. Balanced in both regimes and zero when p_j = 1.
DiffusionRates canonical_sigmas(const ExponentTuple& tuple);

/// Largest |(1/p_j)(1 - 1/p_j) sigma_k - (1/p_k)(1 - 1/p_k) sigma_j| over pairs.
double balance_residual(const ExponentTuple& tuple, const DiffusionRates& rates);

/// C_r = (r^{1/r} / |r'|^{1/r'})^{1/2}, r' = r/(r-1); C_1 = C_inf = 1.
double sharp_constant(double r);

/// (prod_j C_{p_j} / C_p)^d.
double young_constant(const ExponentTuple& tuple, int dim);

/// Both sides of the two-fold coefficient identities behind convolution
/// closure, evaluated in double precision. With
///   A_j = (p sigma_j / p_j) |1 - 1/p_j|
/// and eps the regime sign:
///   cross:    2 sqrt(A_1 A_2)  =  eps (sigma_1 (p - p_1) + sigma_2 (p - p_2)) / (p_1 p_2)
///   gradient: (p-1)(sigma_1 p_1 + sigma_2 p_2)
///               = p sigma_1 (p_1 - 1) + p sigma_2 (p_2 - 1) + eps p_1 p_2 2 sqrt(A_1 A_2)
/// The "printed" variant of the gradient identity drops the p_1 p_2 factor.
struct IdentityReport {
  double cross_lhs, cross_rhs;
  double gradient_lhs, gradient_rhs;
  double printed_lhs, printed_rhs;

  double cross_residual() const;
  double gradient_residual() const;
};

/// Requires a two-fold tuple.
IdentityReport verify_identities(const ExponentTuple& tuple, const DiffusionRates& rates);

using Rational = boost::multiprecision::cpp_rational;

/// Exact rational version. The square-root terms are compared after
/// squaring, together with a sign check; the printed variant is only
/// evaluated when A_1 A_2 is a perfect rational square.
struct ExactIdentityReport {
  Rational p;
  bool cross_holds;
  bool gradient_holds;
  std::optional<Rational> sqrt_a1a2;
  std::optional<Rational> printed_lhs;
  std::optional<Rational> printed_rhs;
};

/// p1, p2 on the same side of 1 with 1/p1 + 1/p2 > 1. Throws otherwise.
ExactIdentityReport verify_identities_exact(const Rational& p1, const Rational& p2, const Rational& sigma1,
                                            const Rational& sigma2);

/// Rational canonical rates |1 - 1/p_j| / p_j.
Rational canonical_sigma_exact(const Rational& pj);

/// Exact square root of a nonnegative rational when it is a perfect square.
std::optional<Rational> rational_sqrt(const Rational& x);

/// Parameters of the time-weighted variant
///   u^{1/p} = t^beta (u_1^{alpha_1} * u_2^{alpha_2}).
struct ExtendedParams {
  double alpha1, alpha2;
  double rho1, rho2;
  double p;
  double sigma1, sigma2;
  double sigma_eff;
  double beta;
  double lambda1, lambda2;
  int dim;
};

/// Checks rho_1 alpha_1 + rho_2 alpha_2 = 1 + 1/p to 1e-12 and the ranges
/// 0 < alpha_j <= 1, 0 <= rho_j <= 1, p >= 1; fills sigma_j = alpha_j (1 -
/// rho_j alpha_j), beta, lambda_j and sigma_eff = (sigma_1/alpha_1 +
/// sigma_2/alpha_2)/p.
ExtendedParams extended_params(double alpha1, double alpha2, double rho1, double rho2, double p, int dim);

/// Residual of alpha_1 (1 - rho_1 alpha_1) sigma_2 = alpha_2 (1 - rho_2 alpha_2) sigma_1.
double weighted_balance_residual(const ExtendedParams& e);

}  // namespace heatflow
