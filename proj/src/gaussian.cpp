#include "heatflow/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace heatflow {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2, got " + std::to_string(dim));
}

Point clean(Point p, int dim) {
  if (dim == 1) p[1] = 0.0;
  return p;
}

}  // namespace

double squared_distance(const Point& x, const Point& y, int dim) {
  const double dx = x[0] - y[0];
  const double dy = dim == 2 ? x[1] - y[1] : 0.0;
  return dx * dx + dy * dy;
}

double norm(const Point& x, int dim) { return std::sqrt(squared_distance(x, Point{0.0, 0.0}, dim)); }

IsotropicGaussian::IsotropicGaussian(double amplitude, double decay, Point center, int dim)
    : amplitude_(amplitude), decay_(decay), center_(clean(center, dim)), dim_(dim) {
  check_dim(dim);
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("gaussian amplitude must be positive");
  if (!(decay > 0.0) || !std::isfinite(decay)) throw std::invalid_argument("gaussian decay must be positive");
}

double IsotropicGaussian::operator()(const Point& x) const {
  return amplitude_ * std::exp(-decay_ * squared_distance(x, center_, dim_));
}

double IsotropicGaussian::mass() const { return amplitude_ * std::pow(kPi / decay_, 0.5 * dim_); }

IsotropicGaussian heat_kernel(double t, int dim, Point center) {
  if (!(t > 0.0)) throw std::invalid_argument("heat kernel time must be positive");
  check_dim(dim);
  return IsotropicGaussian(std::pow(t, -0.5 * dim), kPi / t, center, dim);
}

IsotropicGaussian convolve_gaussians(const IsotropicGaussian& g1, const IsotropicGaussian& g2) {
  if (g1.dim() != g2.dim()) throw std::invalid_argument("convolve_gaussians: dimension mismatch");
  const int d = g1.dim();
  const double a1 = g1.decay(), a2 = g2.decay();
  const double amp = g1.amplitude() * g2.amplitude() * std::pow(kPi / (a1 + a2), 0.5 * d);
  const Point c{g1.center()[0] + g2.center()[0], g1.center()[1] + g2.center()[1]};
  return IsotropicGaussian(amp, a1 * a2 / (a1 + a2), c, d);
}

IsotropicGaussian gaussian_power(const IsotropicGaussian& g, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("gaussian_power: exponent must be positive");
  return IsotropicGaussian(std::pow(g.amplitude(), s), s * g.decay(), g.center(), g.dim());
}

double gaussian_lp_norm(const IsotropicGaussian& g, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("gaussian_lp_norm: p must be positive");
  return g.amplitude() * std::pow(kPi / (g.decay() * p), g.dim() / (2.0 * p));
}

GaussianMixture::GaussianMixture(std::vector<IsotropicGaussian> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("gaussian mixture needs at least one term");
  const int d = terms_.front().dim();
  for (const auto& g : terms_) {
    if (g.dim() != d) throw std::invalid_argument("gaussian mixture terms differ in dimension");
  }
}

double GaussianMixture::mass() const {
  double m = 0.0;
  for (const auto& g : terms_) m += g.mass();
  return m;
}

double GaussianMixture::operator()(const Point& x) const {
  double v = 0.0;
  for (const auto& g : terms_) v += g(x);
  return v;
}

namespace {

// Sums of terms scaled by exp(-shift), with shift the largest log-term, so
// that ratios such as grad u / u stay finite far out in the tails.
struct ScaledJet {
  double shift;
  double value;
  Point gradient;
  double laplacian;
};

ScaledJet scaled_jet(const std::vector<IsotropicGaussian>& terms, const Point& x, int d) {
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& g : terms) {
    shift = std::max(shift, std::log(g.amplitude()) - g.decay() * squared_distance(x, g.center(), d));
  }
  ScaledJet j{shift, 0.0, {0.0, 0.0}, 0.0};
  for (const auto& g : terms) {
    const double a = g.decay();
    const double dx = x[0] - g.center()[0];
    const double dy = d == 2 ? x[1] - g.center()[1] : 0.0;
    const double r2 = dx * dx + dy * dy;
    const double v = std::exp(std::log(g.amplitude()) - a * r2 - shift);
    j.value += v;
    j.gradient[0] += -2.0 * a * dx * v;
    j.gradient[1] += -2.0 * a * dy * v;
    j.laplacian += (4.0 * a * a * r2 - 2.0 * a * d) * v;
  }
  return j;
}

}  // namespace

GaussianMixture::Jet GaussianMixture::jet(const Point& x) const {
  const ScaledJet s = scaled_jet(terms_, x, dim());
  const double scale = std::exp(s.shift);
  return Jet{s.value * scale, {s.gradient[0] * scale, s.gradient[1] * scale}, s.laplacian * scale};
}

Point GaussianMixture::log_gradient(const Point& x) const {
  const ScaledJet s = scaled_jet(terms_, x, dim());
  return {s.gradient[0] / s.value, s.gradient[1] / s.value};
}

double GaussianMixture::laplacian(const Point& x) const { return jet(x).laplacian; }

double GaussianMixture::log_laplacian(const Point& x) const {
  const ScaledJet s = scaled_jet(terms_, x, dim());
  const double gx = s.gradient[0] / s.value;
  const double gy = s.gradient[1] / s.value;
  return s.laplacian / s.value - (gx * gx + gy * gy);
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms, int dim, double support_radius)
    : atoms_(std::move(atoms)), dim_(dim), support_radius_(support_radius) {
  check_dim(dim);
  if (atoms_.empty()) throw std::invalid_argument("atomic measure needs at least one atom");
  double rmax = 0.0;
  for (auto& a : atoms_) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) throw std::invalid_argument("atom weights must be positive");
    a.location = clean(a.location, dim);
    rmax = std::max(rmax, norm(a.location, dim));
  }
  if (support_radius_ < 0.0) {
    support_radius_ = rmax;
  } else if (support_radius_ < rmax) {
    throw std::invalid_argument("atom outside the declared support radius");
  }
}

double AtomicMeasure::mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.weight;
  return m;
}

GaussianMixture evolve_atoms(const AtomicMeasure& mu, double sigma, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("evolve_atoms: time must be positive");
  if (sigma < 0.0) throw std::invalid_argument("evolve_atoms: sigma must be nonnegative");
  if (sigma == 0.0) {
    throw std::invalid_argument("evolve_atoms: sigma = 0 needs function initial data, not a measure");
  }
  std::vector<IsotropicGaussian> terms;
  terms.reserve(mu.atoms().size());
  for (const auto& a : mu.atoms()) {
    const IsotropicGaussian h = heat_kernel(sigma * t, mu.dim(), a.location);
    terms.emplace_back(a.weight * h.amplitude(), h.decay(), a.location, mu.dim());
  }
  return GaussianMixture(std::move(terms));
}

GaussianMixture evolve_mixture(const GaussianMixture& m, double sigma, double t) {
  if (t < 0.0) throw std::invalid_argument("evolve_mixture: time must be nonnegative");
  if (sigma < 0.0) throw std::invalid_argument("evolve_mixture: sigma must be nonnegative");
  if (sigma == 0.0 || t == 0.0) return m;
  const IsotropicGaussian h = heat_kernel(sigma * t, m.dim());
  std::vector<IsotropicGaussian> terms;
  terms.reserve(m.terms().size());
  for (const auto& g : m.terms()) terms.push_back(convolve_gaussians(g, h));
  return GaussianMixture(std::move(terms));
}

int datum_dim(const FlowDatum& datum) {
  return std::visit([](const auto& d) { return d.dim(); }, datum);
}

double datum_mass(const FlowDatum& datum) {
  return std::visit([](const auto& d) { return d.mass(); }, datum);
}

bool is_atomic(const FlowDatum& datum) { return std::holds_alternative<AtomicMeasure>(datum); }

double datum_radius(const FlowDatum& datum) {
  if (const auto* mu = std::get_if<AtomicMeasure>(&datum)) return mu->support_radius();
  const auto& m = std::get<GaussianMixture>(datum);
  double r = 0.0;
  for (const auto& g : m.terms()) r = std::max(r, norm(g.center(), g.dim()));
  return r;
}

GaussianMixture HeatFlow::at(double t) const {
  if (const auto* mu = std::get_if<AtomicMeasure>(&initial)) return evolve_atoms(*mu, sigma, t);
  return evolve_mixture(std::get<GaussianMixture>(initial), sigma, t);
}

}  // namespace heatflow
