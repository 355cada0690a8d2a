#include "heatflow/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "heatflow/csv.hpp"
#include "heatflow/simd/kernels.hpp"

namespace heatflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxQuadraturePoints = 512;

std::vector<HeatFlow> flows_from(std::span<const FlowDatum> initial, std::span<const double> sigma) {
  if (initial.size() != sigma.size()) throw std::invalid_argument("one initial datum per rate required");
  std::vector<HeatFlow> flows;
  for (std::size_t j = 0; j < initial.size(); ++j) flows.push_back(HeatFlow{initial[j], sigma[j]});
  return flows;
}

// d_t u / u for a heat flow of rate sigma: (sigma/4pi)(div v + |v|^2).
std::vector<double> relative_rate(const FlowSnapshot& s, double sigma) {
  std::vector<double> r(s.value.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    double v2 = 0.0;
    for (const auto& g : s.log_gradient) v2 += g[i] * g[i];
    r[i] = sigma / (4.0 * kPi) * (s.log_laplacian[i] + v2);
  }
  return r;
}

// Pointwise f = u^s and d_t f = s f (d_t u / u).
void powered(const FlowSnapshot& s, double sigma, double power, GridField& f, GridField& df) {
  const std::vector<double> rate = relative_rate(s, sigma);
  std::vector<double> fv(s.value.size()), dv(s.value.size());
  for (std::size_t i = 0; i < fv.size(); ++i) {
    fv[i] = std::pow(s.value[i], power);
    dv[i] = power * fv[i] * rate[i];
  }
  f = GridField(s.value.spec(), std::move(fv));
  df = GridField(s.value.spec(), std::move(dv));
}

struct ConvolutionJet {
  GridField w;
  GridField dt_w;
};

GridField convolve_signed(const GridField& a, const GridField& b, ConvolutionMethod method) {
  return method == ConvolutionMethod::direct ? direct_convolve(a, b) : fft_convolve_signed(a, b);
}

// w = f_1 * ... * f_n and its time derivative by the product rule.
ConvolutionJet convolve_with_derivative(const std::vector<GridField>& f, const std::vector<GridField>& df,
                                        ConvolutionMethod method) {
  GridField w = f[0];
  GridField dw = df[0];
  for (std::size_t j = 1; j < f.size(); ++j) {
    GridField a = convolve_signed(dw, f[j], method);
    const GridField b = convolve_signed(w, df[j], method);
    for (std::size_t i = 0; i < a.size(); ++i) a.mutable_values()[i] += b[i];
    dw = std::move(a);
    w = method == ConvolutionMethod::direct ? direct_convolve(w, f[j]) : fft_convolve(w, f[j]);
  }
  return {std::move(w), std::move(dw)};
}

// Gradient and Laplacian of f_1 * ... * f_n by moving both onto f_1, where
// f_1 = u^s has grad f_1 = s f_1 v and Laplace f_1 = s f_1 (div v + s |v|^2).
SpectralDerivatives convolved_derivatives(const FlowSnapshot& s1, double power, const std::vector<GridField>& f) {
  const GridSpec& spec = f[0].spec();
  const std::size_t n = spec.size();
  std::vector<double> lap(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v2 = 0.0;
    for (const auto& g : s1.log_gradient) v2 += g[i] * g[i];
    lap[i] = power * f[0][i] * (s1.log_laplacian[i] + power * v2);
  }
  auto chain = [&](GridField g) {
    for (std::size_t j = 1; j < f.size(); ++j) g = direct_convolve(g, f[j]);
    return g;
  };
  SpectralDerivatives d{{}, chain(GridField(spec, std::move(lap)))};
  for (const auto& v : s1.log_gradient) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = power * f[0][i] * v[i];
    d.gradient.push_back(chain(GridField(spec, std::move(g))));
  }
  return d;
}

std::vector<bool> bulk_mask(const GridSpec& spec, double fraction) {
  std::vector<bool> mask(spec.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = spec.radius(i) < fraction * spec.period;
  return mask;
}

// Minimum of residual over the bulk, tolerance relative to `scale`.
ResidualReport summarize(std::string kind, const std::vector<double>& residual, const std::vector<bool>& mask,
                         const GridSpec& spec, double time, double scale, double rel_tol) {
  ResidualReport r;
  r.kind = std::move(kind);
  r.time = time;
  r.scale = scale;
  r.tolerance = rel_tol * scale;
  r.min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (!mask[i]) continue;
    if (residual[i] < r.min_residual) {
      r.min_residual = residual[i];
      r.node = i;
    }
  }
  r.location = spec.node(r.node);
  r.pass = std::isfinite(r.min_residual) && r.min_residual >= -r.tolerance;
  return r;
}

double bulk_max_abs(const std::vector<double>& a, const std::vector<bool>& mask) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (mask[i]) m = std::max(m, std::abs(a[i]));
  return m;
}

std::vector<double> squared_gradient(const SpectralDerivatives& d) {
  std::vector<double> g2(d.laplacian.size(), 0.0);
  for (const auto& g : d.gradient)
    for (std::size_t i = 0; i < g2.size(); ++i) g2[i] += g[i] * g[i];
  return g2;
}

std::size_t shifted(std::size_t i, std::size_t k, std::size_t n) { return (i + n + n / 2 - k) % n; }

}  // namespace

FlowSnapshot snapshot(const HeatFlow& flow, double t, const GridSpec& spec) {
  const GaussianMixture m = flow.at(t);
  if (m.dim() != spec.dim) throw std::invalid_argument("snapshot: dimension mismatch");
  if (!fits_in_domain(m, spec)) throw std::domain_error("domain too small for support");
  const std::size_t n = spec.size();
  std::vector<double> u(n), dt(n), lap(n);
  std::vector<std::vector<double>> grad(spec.dim, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Point x = spec.node(i);
    const GaussianMixture::Jet j = m.jet(x);
    const Point v = m.log_gradient(x);
    u[i] = j.value;
    dt[i] = flow.sigma / (4.0 * kPi) * j.laplacian;
    for (int a = 0; a < spec.dim; ++a) grad[a][i] = v[a];
    lap[i] = m.log_laplacian(x);
  }
  FlowSnapshot s{GridField(spec, std::move(u)), GridField(spec, std::move(dt)), {}, GridField(spec, std::move(lap))};
  for (auto& g : grad) s.log_gradient.emplace_back(spec, std::move(g));
  return s;
}

FlowSnapshot constant_snapshot(const GridSpec& spec, double value) {
  FlowSnapshot s{GridField::constant(spec, value), GridField::constant(spec, 0.0), {},
                 GridField::constant(spec, 0.0)};
  for (int a = 0; a < spec.dim; ++a) s.log_gradient.push_back(GridField::constant(spec, 0.0));
  return s;
}

ResidualReport closure_residual(std::span<const FlowDatum> initial, const ExponentTuple& exponents,
                                const DiffusionRates& rates, double time, const GridSpec& spec,
                                const ResidualOptions& options) {
  if (initial.size() != exponents.folds()) throw std::invalid_argument("one initial datum per exponent required");
  const std::vector<HeatFlow> flows = flows_from(initial, rates.sigma);
  const double p = exponents.p();
  const ConvolutionMethod method = p < 1.0 ? ConvolutionMethod::direct : ConvolutionMethod::fft;

  std::vector<GridField> fields;
  std::optional<FlowSnapshot> first;
  auto build = [&](double t) {
    std::vector<GridField> f, df;
    for (std::size_t j = 0; j < flows.size(); ++j) {
      FlowSnapshot s = snapshot(flows[j], t, spec);
      GridField a = s.value, b = s.value;
      powered(s, flows[j].sigma, 1.0 / exponents.p_list()[j], a, b);
      if (a.max_abs() == 0.0) throw std::domain_error("closure_residual: flow vanishes on the grid");
      f.push_back(std::move(a));
      df.push_back(std::move(b));
      if (j == 0) first = std::move(s);
    }
    fields = f;
    return convolve_with_derivative(f, df, method);
  };

  const ConvolutionJet jet = build(time);
  // A concave power amplifies absolute spectral error in the tails, so for
  // p < 1 the derivatives are local sums as well.
  const SpectralDerivatives d = method == ConvolutionMethod::direct
                                    ? convolved_derivatives(*first, 1.0 / exponents.p_list()[0], fields)
                                    : spectral_grad_laplacian(jet.w);
  const std::vector<double> g2 = squared_gradient(d);
  const std::vector<bool> mask = bulk_mask(spec, options.bulk_fraction);

  const std::size_t n = spec.size();
  std::vector<double> dt_u(n), lap_u(n), res(n);
  const double eps = exponents.epsilon();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = jet.w[i];
    if (!mask[i] || w <= 0.0) {
      res[i] = dt_u[i] = lap_u[i] = 0.0;
      continue;
    }
    const double wp1 = std::pow(w, p - 1.0);
    dt_u[i] = p * wp1 * jet.dt_w[i];
    lap_u[i] = p * wp1 * d.laplacian[i] + p * (p - 1.0) * std::pow(w, p - 2.0) * g2[i];
    res[i] = eps * (dt_u[i] - rates.sigma_eff / (4.0 * kPi) * lap_u[i]);
  }
  const double scale = std::max(bulk_max_abs(dt_u, mask), bulk_max_abs(lap_u, mask));
  ResidualReport r = summarize(exponents.regime() == Regime::forward ? "closure" : "closure_reverse", res, mask,
                               spec, time, scale, options.rel_tol);

  if (options.dt_probe > 0.0) {
    const ConvolutionJet plus = build(time + options.dt_probe);
    const ConvolutionJet minus = build(time - options.dt_probe);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!mask[i]) continue;
      const double fd = (std::pow(plus.w[i], p) - std::pow(minus.w[i], p)) / (2.0 * options.dt_probe);
      worst = std::max(worst, std::abs(fd - dt_u[i]));
    }
    r.time_derivative_mismatch = scale > 0.0 ? worst / scale : worst;
  }
  return r;
}

WeightedResidual weighted_closure_residual(std::span<const FlowDatum> initial, const ExtendedParams& params,
                                           double time, const GridSpec& spec, const ResidualOptions& options) {
  if (initial.size() != 2) throw std::invalid_argument("weighted closure needs two flows");
  if (!(time > 0.0)) throw std::invalid_argument("time must be positive");
  const double sig[2] = {params.sigma1, params.sigma2};
  const double alpha[2] = {params.alpha1, params.alpha2};
  const std::vector<HeatFlow> flows = flows_from(initial, sig);
  const std::vector<bool> mask = bulk_mask(spec, options.bulk_fraction);
  const std::size_t n = spec.size();
  const double lc_scale = 2.0 * spec.dim * kPi / time;

  WeightedResidual out;
  std::vector<GridField> f, df;
  std::optional<FlowSnapshot> first;
  for (std::size_t j = 0; j < 2; ++j) {
    FlowSnapshot s = snapshot(flows[j], time, spec);
    std::vector<double> gate(n);
    for (std::size_t i = 0; i < n; ++i) gate[i] = sig[j] * s.log_laplacian[i] + lc_scale;
    out.gate[j] = summarize("input_logconv_" + std::to_string(j + 1), gate, mask, spec, time, lc_scale,
                            options.rel_tol);
    GridField a = s.value, b = s.value;
    powered(s, sig[j], alpha[j], a, b);
    f.push_back(std::move(a));
    df.push_back(std::move(b));
    if (j == 0) first = std::move(s);
  }
  const ConvolutionJet jet = convolve_with_derivative(f, df, ConvolutionMethod::fft);
  const SpectralDerivatives d = spectral_grad_laplacian(jet.w);
  const std::vector<double> g2 = squared_gradient(d);
  // div(grad w / w) divides by w, so it needs relative accuracy in the tails.
  const SpectralDerivatives local = convolved_derivatives(*first, alpha[0], f);
  const std::vector<double> local_g2 = squared_gradient(local);
  const GridField w_local = direct_convolve(f[0], f[1]);

  const double p = params.p;
  const double beta = params.beta;
  const double tw = std::pow(time, beta * p);
  std::vector<double> dt_u(n, 0.0), lap_u(n, 0.0), heat(n, 0.0), lc(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = jet.w[i];
    if (!mask[i] || w <= 0.0 || w_local[i] <= 0.0) continue;
    const double wp1 = std::pow(w, p - 1.0);
    dt_u[i] = beta * p * tw / time * wp1 * w + tw * p * wp1 * jet.dt_w[i];
    lap_u[i] = tw * (p * wp1 * d.laplacian[i] + p * (p - 1.0) * std::pow(w, p - 2.0) * g2[i]);
    heat[i] = dt_u[i] - params.sigma_eff / (4.0 * kPi) * lap_u[i];
    const double wl = w_local[i];
    lc[i] = params.sigma_eff * p * (wl * local.laplacian[i] - local_g2[i]) / (wl * wl) + lc_scale;
  }
  const double scale = std::max(bulk_max_abs(dt_u, mask), bulk_max_abs(lap_u, mask));
  out.heat = summarize("weighted_heat", heat, mask, spec, time, scale, options.rel_tol);
  out.logconv = summarize("weighted_logconv", lc, mask, spec, time, lc_scale, options.rel_tol);
  return out;
}

ResidualReport pointwise_closure_residual(PointwiseClosure kind, std::span<const FlowDatum> initial, double p1,
                                          double p2, double time, const GridSpec& spec,
                                          const ResidualOptions& options) {
  if (initial.size() != 2) throw std::invalid_argument("pointwise closure needs two flows");
  if (kind == PointwiseClosure::geometric_mean) {
    if (!(p1 >= 1.0) || !(p2 >= 1.0) || std::abs(1.0 / p1 + 1.0 / p2 - 1.0) > 1e-12) {
      throw std::invalid_argument("geometric mean needs 1/p1 + 1/p2 = 1 with p1, p2 >= 1");
    }
  }
  const double unit[2] = {1.0, 1.0};
  const std::vector<HeatFlow> flows = flows_from(initial, unit);
  const FlowSnapshot s1 = snapshot(flows[0], time, spec);
  const FlowSnapshot s2 = snapshot(flows[1], time, spec);
  const std::vector<double> r1 = relative_rate(s1, 1.0);
  const std::vector<double> r2 = relative_rate(s2, 1.0);

  const std::size_t n = spec.size();
  std::vector<double> u(n), dt_u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = s1.value[i], b = s2.value[i];
    if (kind == PointwiseClosure::geometric_mean) {
      u[i] = std::pow(a, 1.0 / p1) * std::pow(b, 1.0 / p2);
      dt_u[i] = u[i] * (r1[i] / p1 + r2[i] / p2);
    } else {
      const double sum = a + b;
      u[i] = sum > 0.0 ? a * b / sum : 0.0;
      // d_t (ab/(a+b)) = (b^2 d_t a + a^2 d_t b) / (a+b)^2, with d_t a = a r1.
      dt_u[i] = sum > 0.0 ? (b * b * a * r1[i] + a * a * b * r2[i]) / (sum * sum) : 0.0;
    }
  }
  const GridField uf(spec, u);
  const SpectralDerivatives d = spectral_grad_laplacian(uf);
  const std::vector<bool> mask = bulk_mask(spec, options.bulk_fraction);
  std::vector<double> res(n), lap(d.laplacian.values().begin(), d.laplacian.values().end());
  for (std::size_t i = 0; i < n; ++i) res[i] = dt_u[i] - lap[i] / (4.0 * kPi);
  const double scale = std::max(bulk_max_abs(dt_u, mask), bulk_max_abs(lap, mask));
  return summarize(kind == PointwiseClosure::geometric_mean ? "geometric_mean" : "harmonic_addition", res, mask,
                   spec, time, scale, options.rel_tol);
}

double q_prime_remark(std::span<const FlowDatum> initial, const ExponentTuple& exponents,
                      const DiffusionRates& rates, double time, const GridSpec& spec) {
  if (spec.dim != 1) throw std::invalid_argument("q_prime_remark is implemented for d = 1 only");
  if (spec.points > kMaxQuadraturePoints) throw std::invalid_argument("q_prime_remark needs N <= 512");
  if (exponents.folds() != 2 || initial.size() != 2) throw std::invalid_argument("q_prime_remark is two-fold");
  const std::vector<HeatFlow> flows = flows_from(initial, rates.sigma);
  const std::size_t n = spec.points;
  const double h = spec.spacing();
  const double p = exponents.p();

  std::vector<double> f[2], v[2];
  double c[2];
  for (int j = 0; j < 2; ++j) {
    const double pj = exponents.p_list()[j];
    c[j] = std::sqrt(rates.sigma[j] / pj * std::abs(1.0 / pj - 1.0));
    const GaussianMixture m = flows[j].at(time);
    if (!fits_in_domain(m, spec)) throw std::domain_error("domain too small for support");
    f[j].resize(n);
    v[j].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Point x = spec.node(i);
      f[j][i] = std::pow(m(x), 1.0 / pj);
      v[j][i] = m.log_gradient(x)[0];
    }
  }

  const auto& kern = simd::active();
  std::vector<double> a(n), g(n);
  double q_sum = 0.0, integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t m = shifted(i, k, n);
      a[k] = f[0][m] * f[1][k];
      g[k] = c[0] * v[0][m] + c[1] * v[1][k];
    }
    const double w = h * kern.sum(a.data(), n);
    if (w <= 0.0) continue;
    double inner = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (a[k] == 0.0) continue;
      inner += a[k] * kern.weighted_sq_diff(a.data(), g.data(), g[k], n);
    }
    q_sum += std::pow(w, p);
    integral += std::pow(w, p - 2.0) * inner * h * h;
  }
  const double q = std::pow(h * q_sum, 1.0 / p);
  return exponents.epsilon() / (8.0 * kPi * std::pow(q, p - 1.0)) * h * integral;
}

double numeric_dqdt(const QCurve& curve, std::size_t index) {
  if (index == 0 || index + 1 >= curve.times.size()) throw std::out_of_range("numeric_dqdt needs an interior index");
  const double t0 = curve.times[index - 1], t1 = curve.times[index], t2 = curve.times[index + 1];
  const double q0 = curve.values[index - 1], q1 = curve.values[index], q2 = curve.values[index + 1];
  const double hm = t1 - t0, hp = t2 - t1;
  return (hm * hm * q2 - hp * hp * q0 + (hp * hp - hm * hm) * q1) / (hm * hp * (hm + hp));
}

double LemmaTerms::relative_residual() const {
  const double diff = std::abs(lhs - rhs);
  return scale > 0.0 ? diff / scale : diff;
}

LemmaTerms lemma_main_residual(const FlowSnapshot& u1, const FlowSnapshot& u2, double alpha1, double alpha2,
                               double lambda1, double lambda2, std::size_t node) {
  const GridSpec& spec = u1.value.spec();
  if (!(spec == u2.value.spec())) throw std::invalid_argument("lemma_main_residual: grid mismatch");
  if (spec.dim != 1) throw std::invalid_argument("lemma_main_residual is implemented for d = 1 only");
  if (spec.points > kMaxQuadraturePoints) throw std::invalid_argument("lemma_main_residual needs N <= 512");
  if (!(alpha1 > 0.0 && alpha2 > 0.0 && lambda1 > 0.0 && lambda2 > 0.0)) {
    throw std::invalid_argument("lemma_main_residual needs positive alpha and Lambda");
  }
  if (node >= spec.points) throw std::out_of_range("lemma_main_residual: node outside the grid");
  const std::size_t n = spec.points;
  const double h = spec.spacing();

  const GridField f1 = pointwise_power(u1.value, alpha1);
  const GridField f2 = pointwise_power(u2.value, alpha2);
  const auto& v1 = u1.log_gradient[0];
  const auto& v2 = u2.log_gradient[0];
  const double root = std::sqrt(lambda1 * lambda2);

  std::vector<double> a(n), g1(n), g2(n), g12(n);
  double w = 0.0, t11 = 0.0, t22 = 0.0, t12 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = shifted(node, k, n);
    a[k] = f1[m] * f2[k];
    g1[k] = v1[m];
    g2[k] = v2[k];
    g12[k] = v1[m] + v2[k];
    w += a[k];
    t11 += a[k] * v1[m] * v1[m];
    t22 += a[k] * v2[k] * v2[k];
    t12 += a[k] * v1[m] * v2[k];
  }
  w *= h;
  t11 *= h;
  t22 *= h;
  t12 *= h;

  const GridField conv = fft_convolve(f1, f2);
  const double grad = spectral_grad_laplacian(conv).gradient[0][node];
  const double coef = lambda1 / (alpha1 * alpha1) + lambda2 / (alpha2 * alpha2) + 2.0 * root / (alpha1 * alpha2);

  const double terms[4] = {lambda1 * (w * t11), lambda2 * (w * t22), 2.0 * root * (w * t12), -coef * (grad * grad)};
  LemmaTerms out{0.0, 0.0, 0.0};
  for (double t : terms) {
    out.lhs += t;
    out.scale += std::abs(t);
  }

  // The square (g_k - g_l)^2 with g = sqrt(Lambda_1) v_1 + sqrt(Lambda_2) v_2
  // is expanded so that the Lambda dependence is a plain factor.
  const auto& kern = simd::active();
  double s11 = 0.0, s22 = 0.0, s_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k] == 0.0) continue;
    s11 += a[k] * kern.weighted_sq_diff(a.data(), g1.data(), g1[k], n);
    s22 += a[k] * kern.weighted_sq_diff(a.data(), g2.data(), g2[k], n);
    s_sum += a[k] * kern.weighted_sq_diff(a.data(), g12.data(), g12[k], n);
  }
  const double s12 = 0.5 * (s_sum - s11 - s22);
  const double hh = 0.5 * h * h;
  out.rhs = lambda1 * (hh * s11) + lambda2 * (hh * s22) + 2.0 * root * (hh * s12);
  return out;
}

std::string residual_csv_header(int dim) {
  return dim == 2 ? "experiment,kind,min_residual,tolerance,pass,t,x,y\n"
                  : "experiment,kind,min_residual,tolerance,pass,t,x\n";
}

std::string residual_csv_row(const std::string& experiment, const ResidualReport& r, int dim) {
  std::ostringstream os;
  os << experiment << ',' << r.kind << ',' << format_number(r.min_residual) << ',' << format_number(r.tolerance) << ','
     << (r.pass ? "true" : "false") << ',' << format_number(r.time) << ',' << format_number(r.location[0]);
  if (dim == 2) os << ',' << format_number(r.location[1]);
  os << '\n';
  return os.str();
}

}  // namespace heatflow
