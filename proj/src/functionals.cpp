#include "heatflow/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "heatflow/csv.hpp"

namespace heatflow {

namespace {

void check_field(const GridField& f) {
  if (f.min() < 0.0) throw std::domain_error("flow field has negative values");
  if (f.max_abs() == 0.0) throw std::domain_error("flow field vanishes identically");
}

std::vector<HeatFlow> make_flows(std::span<const FlowDatum> initial, std::span<const double> sigma) {
  if (initial.size() != sigma.size()) throw std::invalid_argument("one initial datum per exponent required");
  std::vector<HeatFlow> flows;
  flows.reserve(initial.size());
  for (std::size_t j = 0; j < initial.size(); ++j) flows.push_back(HeatFlow{initial[j], sigma[j]});
  return flows;
}

void check_fits(const std::vector<HeatFlow>& flows, double t_max, const GridSpec& spec) {
  double needed = 0.0;
  bool ok = true;
  for (const auto& f : flows) {
    const GaussianMixture m = f.at(t_max);
    needed = std::max(needed, minimal_period(m));
    ok = ok && fits_in_domain(m, spec);
  }
  if (!ok) {
    std::ostringstream os;
    os << "domain too small for support: minimal admissible L = " << std::setprecision(6) << needed;
    throw std::domain_error(os.str());
  }
}

std::vector<double> check_times(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("empty time grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw std::invalid_argument("times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("times must be strictly increasing");
  }
  return {times.begin(), times.end()};
}

const IsotropicGaussian& single_term(const GaussianMixture& m) {
  if (m.terms().size() != 1) throw std::invalid_argument("oracle path needs single-Gaussian flows");
  return m.terms().front();
}

}  // namespace

GridField power_convolution(std::span<const GridField> flows, std::span<const double> powers, double p,
                            ConvolutionMethod method) {
  if (flows.empty() || flows.size() != powers.size()) throw std::invalid_argument("one power per flow required");
  if (method == ConvolutionMethod::automatic) {
    method = p < 1.0 ? ConvolutionMethod::direct : ConvolutionMethod::fft;
  }
  for (const auto& f : flows) check_field(f);
  GridField acc = pointwise_power(flows[0], powers[0]);
  for (std::size_t j = 1; j < flows.size(); ++j) {
    const GridField fj = pointwise_power(flows[j], powers[j]);
    acc = method == ConvolutionMethod::direct ? direct_convolve(acc, fj) : fft_convolve(acc, fj);
  }
  return acc;
}

double q_value(std::span<const GridField> flows, const ExponentTuple& exponents, double beta, double time,
               ConvolutionMethod method) {
  if (flows.size() != exponents.folds()) throw std::invalid_argument("one flow per exponent required");
  if (!(time > 0.0)) throw std::invalid_argument("time must be positive");
  std::vector<double> powers;
  for (double q : exponents.p_list()) powers.push_back(1.0 / q);
  const GridField conv = power_convolution(flows, powers, exponents.p(), method);
  return std::pow(time, beta) * grid_lp_norm(conv, exponents.p());
}

QCurve q_curve(std::span<const FlowDatum> initial, const ExponentTuple& exponents, const DiffusionRates& rates,
               double beta, std::span<const double> times, const GridSpec& spec, ConvolutionMethod method) {
  spec.validate();
  QCurve curve;
  curve.times = check_times(times);
  const std::vector<HeatFlow> flows = make_flows(initial, rates.sigma);
  check_fits(flows, curve.times.back(), spec);

  curve.p_list = exponents.p_list();
  curve.p = exponents.p();
  curve.sigma = rates.sigma;
  curve.beta = beta;
  curve.dim = spec.dim;
  curve.grid = spec;

  for (double t : curve.times) {
    std::vector<GridField> fields;
    fields.reserve(flows.size());
    for (const auto& f : flows) fields.push_back(sample_mixture(f.at(t), spec));
    curve.values.push_back(q_value(fields, exponents, beta, t, method));
  }
  return curve;
}

QCurve weighted_q_curve(std::span<const FlowDatum> initial, const ExtendedParams& params,
                        std::span<const double> times, const GridSpec& spec) {
  spec.validate();
  if (initial.size() != 2) throw std::invalid_argument("weighted functional needs two flows");
  QCurve curve;
  curve.times = check_times(times);
  const std::vector<double> sigma{params.sigma1, params.sigma2};
  const std::vector<HeatFlow> flows = make_flows(initial, sigma);
  check_fits(flows, curve.times.back(), spec);

  const std::vector<double> powers{params.alpha1, params.alpha2};
  curve.p_list = {1.0 / params.alpha1, 1.0 / params.alpha2};
  curve.p = params.p;
  curve.sigma = sigma;
  curve.beta = params.beta;
  curve.dim = spec.dim;
  curve.grid = spec;
  for (double t : curve.times) {
    std::vector<GridField> fields;
    for (const auto& f : flows) fields.push_back(sample_mixture(f.at(t), spec));
    const GridField conv = power_convolution(fields, powers, params.p);
    curve.values.push_back(std::pow(t, params.beta) * grid_lp_norm(conv, params.p));
  }
  return curve;
}

double q_value_oracle(std::span<const IsotropicGaussian> flows, std::span<const double> powers, double p,
                      double beta, double time) {
  if (flows.empty() || flows.size() != powers.size()) throw std::invalid_argument("one power per flow required");
  IsotropicGaussian acc = gaussian_power(flows[0], powers[0]);
  for (std::size_t j = 1; j < flows.size(); ++j) acc = convolve_gaussians(acc, gaussian_power(flows[j], powers[j]));
  return std::pow(time, beta) * gaussian_lp_norm(acc, p);
}

QCurve q_curve_oracle(std::span<const FlowDatum> initial, const ExponentTuple& exponents,
                      const DiffusionRates& rates, double beta, std::span<const double> times) {
  QCurve curve;
  curve.times = check_times(times);
  const std::vector<HeatFlow> flows = make_flows(initial, rates.sigma);
  curve.p_list = exponents.p_list();
  curve.p = exponents.p();
  curve.sigma = rates.sigma;
  curve.beta = beta;
  curve.dim = datum_dim(initial.front());
  curve.name = "oracle";
  std::vector<double> powers;
  for (double q : exponents.p_list()) powers.push_back(1.0 / q);
  for (double t : curve.times) {
    std::vector<IsotropicGaussian> gs;
    for (const auto& f : flows) gs.push_back(single_term(f.at(t)));
    curve.values.push_back(q_value_oracle(gs, powers, exponents.p(), beta, t));
  }
  return curve;
}

double hausdorff_young_value(const GridField& u, int p) {
  if (p < 2 || p % 2 != 0) throw std::invalid_argument("hausdorff_young_value needs an even exponent p >= 2");
  const double s = static_cast<double>(p - 1) / p;  // 1/p'
  const std::size_t folds = static_cast<std::size_t>(p / 2);
  const std::vector<GridField> flows(folds, u);
  const std::vector<double> powers(folds, s);
  const GridField conv = power_convolution(flows, powers, 2.0, ConvolutionMethod::fft);
  return std::pow(grid_lp_norm(conv, 2.0), 2.0 / p);
}

double hausdorff_young_fourier(const GridField& u, int p) {
  if (p < 2 || p % 2 != 0) throw std::invalid_argument("hausdorff_young_fourier needs an even exponent p >= 2");
  check_field(u);
  const std::vector<double> m = fourier_modulus(pointwise_power(u, static_cast<double>(p - 1) / p));
  double s = 0.0;
  for (double v : m) s += std::pow(v, p);
  const double dxi = std::pow(1.0 / u.spec().period, u.spec().dim);
  return std::pow(s * dxi, 1.0 / p);
}

EndpointLimits endpoint_limits(std::span<const GaussianMixture> densities, const ExponentTuple& exponents,
                               const GridSpec& spec) {
  if (densities.size() != exponents.folds()) throw std::invalid_argument("one density per exponent required");
  std::vector<GridField> fields;
  std::vector<double> powers;
  double norms = 1.0;
  for (std::size_t j = 0; j < densities.size(); ++j) {
    fields.push_back(sample_mixture(densities[j], spec));
    const double pj = exponents.p_list()[j];
    powers.push_back(1.0 / pj);
    norms *= std::pow(densities[j].mass(), 1.0 / pj);  // ||f_j||_{p_j} with f_j^{p_j} the density
  }
  const GridField conv = power_convolution(fields, powers, exponents.p());
  return EndpointLimits{grid_lp_norm(conv, exponents.p()), young_constant(exponents, spec.dim) * norms};
}

std::vector<double> log_spaced(double t_min, double t_max, std::size_t count) {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) throw std::invalid_argument("log_spaced: bad range");
  std::vector<double> t(count);
  const double a = std::log(t_min), b = std::log(t_max);
  for (std::size_t i = 0; i < count; ++i) t[i] = std::exp(a + (b - a) * static_cast<double>(i) / (count - 1));
  t.front() = t_min;
  t.back() = t_max;
  return t;
}

std::vector<double> linear_spaced(double t_min, double t_max, std::size_t count) {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) throw std::invalid_argument("linear_spaced: bad range");
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = t_min + (t_max - t_min) * static_cast<double>(i) / (count - 1);
  t.back() = t_max;
  return t;
}

MonotonicityCheck check_monotone(std::span<const double> values, int direction, double rel_tol) {
  MonotonicityCheck c{0.0, 0, true};
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double step = direction * (values[i + 1] - values[i]) / std::abs(values[i]);
    if (i == 0 || step < c.worst_step) {
      c.worst_step = step;
      c.index = i;
    }
  }
  c.pass = c.worst_step >= -rel_tol;
  return c;
}

double relative_variation(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return (*hi - *lo) / std::abs(*hi);
}

std::string qcurve_csv(const QCurve& curve, const std::string& config_echo) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# experiment=" << curve.name << " n=" << curve.p_list.size() << " p=" << join_numbers(curve.p_list)
     << ';' << curve.p << " sigma=" << join_numbers(curve.sigma) << " beta=" << curve.beta << " d=" << curve.dim
     << " L=" << curve.grid.period << " N=" << curve.grid.points << '\n';
  if (!config_echo.empty()) os << "# config: " << config_echo << '\n';
  os << "t,Q\n";
  for (std::size_t i = 0; i < curve.times.size(); ++i) os << curve.times[i] << ',' << curve.values[i] << '\n';
  return os.str();
}

}  // namespace heatflow
