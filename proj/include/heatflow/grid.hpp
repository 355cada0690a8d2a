#pragma once

// Periodic sampled fields on the torus [-L/2, L/2)^d, d in {1, 2}.
//
// Nodes sit at x_i = -L/2 + i h, h = L/N, so the origin is node N/2. Values
// are stored row-major (index = i_x * N + i_y in 2-D). The Fourier
// convention is e^{-2 pi i x.xi}: the heat kernel H_t has multiplier
// exp(-pi t |xi|^2) and the Laplacian has symbol -4 pi^2 |xi|^2.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "heatflow/gaussian.hpp"

namespace heatflow {

struct GridSpec {
  int dim = 1;
  double period = 16.0;
  std::size_t points = 256;  // per dimension, a power of two >= 16

  /// Throws std::invalid_argument when the spec is not admissible.
  void validate() const;
  double spacing() const { return period / static_cast<double>(points); }
  double cell_volume() const;
  std::size_t size() const { return dim == 2 ? points * points : points; }
  double coordinate(std::size_t i) const { return -0.5 * period + static_cast<double>(i) * spacing(); }
  Point node(std::size_t index) const;
  /// Euclidean distance of a node from the origin.
  double radius(std::size_t index) const;

  bool operator==(const GridSpec& other) const = default;
};

class GridField {
 public:
  GridField(GridSpec spec, std::vector<double> values);
  static GridField constant(GridSpec spec, double value);

  const GridSpec& spec() const { return spec_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double min() const;
  double max_abs() const;
  /// Riemann mass h^d sum values.
  double mass() const;

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

/// Relative tail level below which a mixture counts as concentrated.
inline constexpr double kWraparoundTolerance = 1e-14;

/// True when every term, measured from its own center, has decayed below
/// kWraparoundTolerance of the mixture peak at the edge of the box.
bool fits_in_domain(const GaussianMixture& m, const GridSpec& spec);
/// Smallest period for which fits_in_domain holds.
double minimal_period(const GaussianMixture& m);

/// Samples the mixture at every node. Throws std::domain_error
/// "domain too small for support" when fits_in_domain fails.
GridField sample_mixture(const GaussianMixture& m, const GridSpec& spec);

/// Samples an arbitrary function of the node position (no wraparound check).
template <class F>
GridField sample(const GridSpec& spec, F&& f) {
  std::vector<double> v(spec.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(spec.node(i));
  return GridField(spec, std::move(v));
}

/// Circular convolution scaled by h^d, approximating int f(x - y) g(y) dy.
/// Both inputs must be nonnegative; FFT round-off below 1e-13 of the output
/// peak is clamped to zero and anything more negative throws std::logic_error.
GridField fft_convolve(const GridField& f, const GridField& g);

/// Same convolution for signed inputs, without clamping.
GridField fft_convolve_signed(const GridField& f, const GridField& g);

/// Same convolution by direct summation. Terms of nonnegative inputs are
/// summed without cancellation, so tails keep full relative accuracy.
/// O(N^{2d}).
GridField direct_convolve(const GridField& f, const GridField& g);

/// (h^d sum f^p)^{1/p}, p > 0. Negative entries throw std::domain_error.
double grid_lp_norm(const GridField& f, double p);

/// Pointwise f^s of a nonnegative field.
GridField pointwise_power(const GridField& f, double s);

/// Exact evolution of the trigonometric interpolant under
/// d_t u = (sigma/4pi) Laplace u for time dt.
GridField heat_step(const GridField& f, double sigma, double dt);

struct SpectralDerivatives {
  std::vector<GridField> gradient;  // one component per dimension
  GridField laplacian;
};

/// Spectral gradient and Laplacian of the trigonometric interpolant. The
/// Nyquist mode is dropped from the gradient.
SpectralDerivatives spectral_grad_laplacian(const GridField& f);

/// Pointwise div(grad f / f) = Laplace f / f - |grad f / f|^2 of a strictly
/// positive field, built from the spectral derivatives.
GridField spectral_log_laplacian(const GridField& f);

/// |Fourier transform| of f at the frequencies k/L, as h^d |DFT(f)|. The
/// phase from the box offset drops out of the modulus.
std::vector<double> fourier_modulus(const GridField& f);

/// Field dump: "# experiment=<name>" then "x[,y],value" rows.
std::string field_csv(const GridField& f, const std::string& experiment);

}  // namespace heatflow
