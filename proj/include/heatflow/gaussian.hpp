#pragma once

// Closed-form calculus of isotropic Gaussians c * exp(-a |x - mu|^2) on R^d,
// d in {1, 2}, and of finite positive mixtures of them. Heat flows started
// from atoms or from Gaussian mixtures stay Gaussian mixtures, so this module
// is both the exact representation of every flow used in the library and the
// analytic oracle the grid code is checked against.

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace heatflow {

/// Point in R^d; the second coordinate is ignored (and kept at 0) when d = 1.
using Point = std::array<double, 2>;

double squared_distance(const Point& x, const Point& y, int dim);
double norm(const Point& x, int dim);

class IsotropicGaussian {
 public:
  /// Throws std::invalid_argument unless amplitude > 0, decay > 0, dim in {1,2}.
  IsotropicGaussian(double amplitude, double decay, Point center, int dim);

  double amplitude() const { return amplitude_; }
  double decay() const { return decay_; }
  const Point& center() const { return center_; }
  int dim() const { return dim_; }

  double operator()(const Point& x) const;
  /// Integral over R^d.
  double mass() const;

 private:
  double amplitude_;
  double decay_;
  Point center_;
  int dim_;
};

/// H_t(x) = t^{-d/2} exp(-pi |x|^2 / t), the unit-mass fundamental solution
/// of d_t u = (1/4pi) Laplace u at time t.
IsotropicGaussian heat_kernel(double t, int dim, Point center = {0.0, 0.0});

/// Convolution on R^d; stays an isotropic Gaussian.
IsotropicGaussian convolve_gaussians(const IsotropicGaussian& g1, const IsotropicGaussian& g2);

/// Pointwise power g^s, s > 0.
IsotropicGaussian gaussian_power(const IsotropicGaussian& g, double s);

/// ||g||_p = (int g^p)^{1/p} = c (pi / (a p))^{d / (2p)}, any p > 0.
double gaussian_lp_norm(const IsotropicGaussian& g, double p);

class GaussianMixture {
 public:
  /// Throws std::invalid_argument on an empty list or mixed dimensions.
  explicit GaussianMixture(std::vector<IsotropicGaussian> terms);

  const std::vector<IsotropicGaussian>& terms() const { return terms_; }
  int dim() const { return terms_.front().dim(); }
  double mass() const;

  double operator()(const Point& x) const;
  /// grad u / u.
  Point log_gradient(const Point& x) const;
  /// Laplace u.
  double laplacian(const Point& x) const;
  /// div(grad u / u) = Laplace u / u - |grad u / u|^2.
  double log_laplacian(const Point& x) const;

  /// Value, gradient, Laplacian in one pass over the terms.
  struct Jet {
    double value;
    Point gradient;
    double laplacian;
  };
  Jet jet(const Point& x) const;

 private:
  std::vector<IsotropicGaussian> terms_;
};

struct Atom {
  Point location;
  double weight;
};

class AtomicMeasure {
 public:
  /// Weights must be positive; support_radius must bound every |location|.
  /// A negative support_radius requests the smallest admissible one.
  AtomicMeasure(std::vector<Atom> atoms, int dim, double support_radius = -1.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  int dim() const { return dim_; }
  double support_radius() const { return support_radius_; }
  double mass() const;

 private:
  std::vector<Atom> atoms_;
  int dim_;
  double support_radius_;
};

/// Solution at time t > 0 of d_t u = (sigma/4pi) Laplace u with atomic initial
/// data: sum_i w_i H_{sigma t}(x - x_i). sigma = 0 is rejected because a
/// measure is not a function.
GaussianMixture evolve_atoms(const AtomicMeasure& mu, double sigma, double t);

/// Same flow with mixture initial data. sigma = 0 (or t = 0) returns the
/// datum unchanged.
GaussianMixture evolve_mixture(const GaussianMixture& m, double sigma, double t);

/// Initial datum of a heat flow.
using FlowDatum = std::variant<AtomicMeasure, GaussianMixture>;

int datum_dim(const FlowDatum& datum);
double datum_mass(const FlowDatum& datum);
bool is_atomic(const FlowDatum& datum);
/// Largest |center| over atoms or terms.
double datum_radius(const FlowDatum& datum);

/// A datum together with its diffusion rate sigma in d_t u = (sigma/4pi) Laplace u.
struct HeatFlow {
  FlowDatum initial;
  double sigma;

  GaussianMixture at(double t) const;
};

}  // namespace heatflow
