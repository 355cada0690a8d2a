#pragma once

// The convolution functional
//
//   Q(t) = t^beta || u_1(t)^{s_1} * ... * u_n(t)^{s_n} ||_p ,   s_j = 1/p_j,
//
// along exact heat flows u_j, its Hausdorff-Young special case, its
// t -> 0 and t -> infinity limits, and a closed-form path for single
// Gaussian data.

#include <span>
#include <string>
#include <vector>

#include "heatflow/exponents.hpp"
#include "heatflow/gaussian.hpp"
#include "heatflow/grid.hpp"

namespace heatflow {

enum class ConvolutionMethod {
  automatic,  // direct summation when p < 1, FFT otherwise
  fft,
  direct,
};

/// f_1 * ... * f_n (left to right) with f_j = flows[j]^{powers[j]}.
GridField power_convolution(std::span<const GridField> flows, std::span<const double> powers, double p,
                            ConvolutionMethod method = ConvolutionMethod::automatic);

/// time^beta || prod-convolution of flows[j]^{1/p_j} ||_p.
double q_value(std::span<const GridField> flows, const ExponentTuple& exponents, double beta, double time,
               ConvolutionMethod method = ConvolutionMethod::automatic);

struct QCurve {
  std::string name = "qcurve";
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> p_list;  // the flows enter as u_j^{1/p_j}
  double p = 1.0;
  std::vector<double> sigma;
  double beta = 0.0;
  int dim = 1;
  GridSpec grid;
};

/// Evolves each datum exactly with rate sigma_j to each time, samples it and
/// evaluates q_value. Throws std::domain_error naming the minimal admissible
/// period when the flows at the largest time do not fit the grid.
QCurve q_curve(std::span<const FlowDatum> initial, const ExponentTuple& exponents, const DiffusionRates& rates,
               double beta, std::span<const double> times, const GridSpec& spec,
               ConvolutionMethod method = ConvolutionMethod::automatic);

/// t^beta || u_1^{alpha_1} * u_2^{alpha_2} ||_p with the rates and beta of params.
QCurve weighted_q_curve(std::span<const FlowDatum> initial, const ExtendedParams& params,
                        std::span<const double> times, const GridSpec& spec);

/// Closed-form Q for flows that are single Gaussians (single atoms or
/// single-term mixtures): powers, convolutions and the norm stay Gaussian.
double q_value_oracle(std::span<const IsotropicGaussian> flows, std::span<const double> powers, double p,
                      double beta, double time);

QCurve q_curve_oracle(std::span<const FlowDatum> initial, const ExponentTuple& exponents,
                      const DiffusionRates& rates, double beta, std::span<const double> times);

/// || u^{1/p'} * ... * u^{1/p'} ||_2^{2/p} with p/2 factors, p' = p/(p-1).
/// Odd or non-integer p throws std::invalid_argument.
double hausdorff_young_value(const GridField& u, int p);
/// The same quantity read on the Fourier side, || FT(u^{1/p'}) ||_p, from the
/// grid transform sampled at spacing 1/L.
double hausdorff_young_fourier(const GridField& u, int p);

struct EndpointLimits {
  double q_zero;      // || f_1 * ... * f_n ||_p
  double q_infinity;  // young_constant * prod_j ||f_j||_{p_j}
};

/// densities[j] is the initial datum f_j^{p_j} of flow j.
EndpointLimits endpoint_limits(std::span<const GaussianMixture> densities, const ExponentTuple& exponents,
                               const GridSpec& spec);

std::vector<double> log_spaced(double t_min, double t_max, std::size_t count);
std::vector<double> linear_spaced(double t_min, double t_max, std::size_t count);

struct MonotonicityCheck {
  double worst_step;  // most adverse adjacent difference, relative to Q(t_i)
  std::size_t index;
  bool pass;
};

/// Nondecreasing for direction +1, nonincreasing for -1, each step allowed
/// rel_tol * Q(t_i) of slack.
MonotonicityCheck check_monotone(std::span<const double> values, int direction, double rel_tol);

/// (max - min) / max.
double relative_variation(std::span<const double> values);

/// "# experiment=... n=... p=... sigma=... beta=... d=... L=... N=..." then "t,Q" rows.
std::string qcurve_csv(const QCurve& curve, const std::string& config_echo = {});

}  // namespace heatflow
