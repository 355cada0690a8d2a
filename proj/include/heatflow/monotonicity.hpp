#pragma once

// Derivative-level and PDE-level checks of the closure properties:
// signed residuals of heat inequalities for convolution closures and
// pointwise closures, the closed-form Q'(t), and the quadratic-form identity
// that turns the heat-inequality defect into a perfect square.

#include <span>
#include <string>
#include <vector>

#include "heatflow/exponents.hpp"
#include "heatflow/functionals.hpp"
#include "heatflow/gaussian.hpp"
#include "heatflow/grid.hpp"

namespace heatflow {

struct ResidualReport {
  std::string kind;
  double min_residual = 0.0;
  std::size_t node = 0;
  Point location{0.0, 0.0};
  double time = 0.0;
  double scale = 0.0;
  double tolerance = 0.0;  // absolute: rel_tol * scale
  bool pass = false;
  // Largest |finite-difference d_t u - analytic d_t u| / scale, when probed.
  double time_derivative_mismatch = 0.0;
};

struct ResidualOptions {
  double rel_tol = 1e-8;
  // Residuals (and their scale) are taken over nodes with |x| < bulk_fraction * L.
  double bulk_fraction = 0.25;
  // When > 0, d_t u is also estimated by centered differences of the grid
  // field at t +- dt_probe.
  double dt_probe = 0.0;
};

/// A heat flow sampled at one time, with everything derived analytically
/// from its Gaussian-mixture representation.
struct FlowSnapshot {
  GridField value;                       // u
  GridField time_derivative;             // d_t u = (sigma/4pi) Laplace u
  std::vector<GridField> log_gradient;   // grad u / u
  GridField log_laplacian;               // div(grad u / u)
};

FlowSnapshot snapshot(const HeatFlow& flow, double t, const GridSpec& spec);
/// Constant field with zero derivatives (a steady state on the torus).
FlowSnapshot constant_snapshot(const GridSpec& spec, double value);

/// eps (d_t u - (sigma_eff/4pi) Laplace u) for u^{1/p} = u_1^{1/p_1} * ... * u_n^{1/p_n},
/// the flows being exact heat flows with rates rates.sigma.
ResidualReport closure_residual(std::span<const FlowDatum> initial, const ExponentTuple& exponents,
                                const DiffusionRates& rates, double time, const GridSpec& spec,
                                const ResidualOptions& options = {});

struct WeightedResidual {
  ResidualReport heat;        // d_t u - (sigma/4pi) Laplace u
  ResidualReport logconv;     // sigma div(grad u/u) + 2 d pi / t
  ResidualReport gate[2];     // sigma_j div(grad u_j/u_j) + 2 d pi / t on the inputs
  bool hypothesis_ok() const { return gate[0].pass && gate[1].pass; }
};

/// Both conclusions for u^{1/p} = t^beta (u_1^{alpha_1} * u_2^{alpha_2}).
WeightedResidual weighted_closure_residual(std::span<const FlowDatum> initial, const ExtendedParams& params,
                                           double time, const GridSpec& spec, const ResidualOptions& options = {});

enum class PointwiseClosure { geometric_mean, harmonic_addition };

/// d_t u - (1/4pi) Laplace u for u = u_1^{1/p_1} u_2^{1/p_2} (requires
/// 1/p_1 + 1/p_2 = 1) or 1/u = 1/u_1 + 1/u_2, with unit-rate flows.
ResidualReport pointwise_closure_residual(PointwiseClosure kind, std::span<const FlowDatum> initial, double p1,
                                          double p2, double time, const GridSpec& spec,
                                          const ResidualOptions& options = {});

/// Q'(t) from the triple-integral representation, d = 1, N <= 512.
/// Riemann sums on the grid; the cost is O(N^3).
double q_prime_remark(std::span<const FlowDatum> initial, const ExponentTuple& exponents,
                      const DiffusionRates& rates, double time, const GridSpec& spec);

/// Three-point derivative of a sampled curve at an interior index
/// (non-uniform spacing allowed). Throws std::out_of_range at the ends.
double numeric_dqdt(const QCurve& curve, std::size_t index);

struct LemmaTerms {
  double lhs;    // four convolution products minus the gradient-square term
  double rhs;    // symmetrized double integral
  double scale;  // sum of the magnitudes of the lhs terms
  double relative_residual() const;
};

/// Both sides of the quadratic-form identity at grid node `node` (d = 1,
/// N <= 512). lhs uses direct convolution sums and the spectral gradient of
/// u_1^{alpha_1} * u_2^{alpha_2}; rhs is a brute-force double sum.
LemmaTerms lemma_main_residual(const FlowSnapshot& u1, const FlowSnapshot& u2, double alpha1, double alpha2,
                               double lambda1, double lambda2, std::size_t node);

/// "experiment,kind,min_residual,tolerance,pass,t,x[,y]" header and rows.
std::string residual_csv_header(int dim);
std::string residual_csv_row(const std::string& experiment, const ResidualReport& r, int dim);

}  // namespace heatflow
