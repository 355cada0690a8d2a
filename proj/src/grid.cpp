#include "heatflow/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "heatflow/simd/kernels.hpp"

namespace heatflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClampTolerance = 1e-13;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// FFTW planning is not thread-safe; execution of a plan on its own buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

// One in-place transform with a plan private to this call.
class Transform {
 public:
  Transform(const GridSpec& spec, int sign) : n_(spec.size()), buffer_(fftw_alloc_complex(spec.size())) {
    if (!buffer_) throw std::bad_alloc();
    const int np = static_cast<int>(spec.points);
    std::lock_guard lock(planner_mutex());
    plan_ = spec.dim == 1 ? fftw_plan_dft_1d(np, buffer_.get(), buffer_.get(), sign, FFTW_ESTIMATE)
                          : fftw_plan_dft_2d(np, np, buffer_.get(), buffer_.get(), sign, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("fftw planning failed");
  }
  ~Transform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  double* data() { return reinterpret_cast<double*>(buffer_.get()); }
  void run() { fftw_execute(plan_); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  ComplexBuffer buffer_;
  fftw_plan plan_ = nullptr;
};

std::vector<double> forward(const GridField& f) {
  Transform t(f.spec(), FFTW_FORWARD);
  double* z = t.data();
  for (std::size_t i = 0; i < f.size(); ++i) {
    z[2 * i] = f[i];
    z[2 * i + 1] = 0.0;
  }
  t.run();
  return std::vector<double>(z, z + 2 * f.size());
}

// Inverse transform including the 1/N^d normalization; returns the real part.
std::vector<double> inverse_real(const GridSpec& spec, const std::vector<double>& spectrum) {
  Transform t(spec, FFTW_BACKWARD);
  std::copy(spectrum.begin(), spectrum.end(), t.data());
  t.run();
  const double scale = 1.0 / static_cast<double>(spec.size());
  std::vector<double> out(spec.size());
  const double* z = t.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = z[2 * i] * scale;
  return out;
}

// Signed frequency k/L of FFT index j.
double frequency(std::size_t j, const GridSpec& spec) {
  const auto n = static_cast<long>(spec.points);
  long k = static_cast<long>(j);
  if (k >= n / 2) k -= n;
  return static_cast<double>(k) / spec.period;
}

double squared_frequency(std::size_t index, const GridSpec& spec) {
  if (spec.dim == 1) {
    const double xi = frequency(index, spec);
    return xi * xi;
  }
  const double a = frequency(index / spec.points, spec);
  const double b = frequency(index % spec.points, spec);
  return a * a + b * b;
}

// Node positions of circularly convolved arrays are offset by -L/2 per axis;
// shift by N/2 to move them back onto the grid.
std::vector<double> recenter(const GridSpec& spec, const std::vector<double>& c) {
  const std::size_t n = spec.points;
  const std::size_t half = n / 2;
  std::vector<double> out(c.size());
  if (spec.dim == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = c[(i + half) % n];
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = c[((i + half) % n) * n + (j + half) % n];
  }
  return out;
}

void require_same_spec(const GridField& f, const GridField& g) {
  if (!(f.spec() == g.spec())) throw std::invalid_argument("grid spec mismatch");
}

GridField circular_fft(const GridField& f, const GridField& g) {
  require_same_spec(f, g);
  const GridSpec& spec = f.spec();
  std::vector<double> a = forward(f);
  const std::vector<double> b = forward(g);
  simd::active().complex_mul(a.data(), b.data(), a.data(), spec.size());
  std::vector<double> c = inverse_real(spec, a);
  const double h = spec.cell_volume();
  for (double& v : c) v *= h;
  return GridField(spec, recenter(spec, c));
}

// R[j] = row[(N - j) mod N] for j in [0, 2N), so that
// sum_k row[(m - k) mod N] g[k] = dot(R + N - m, g).
std::vector<double> reflected(std::span<const double> row) {
  const std::size_t n = row.size();
  std::vector<double> r(2 * n);
  for (std::size_t j = 0; j < 2 * n; ++j) r[j] = row[(n - j % n) % n];
  return r;
}

}  // namespace

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (!(period > 0.0) || !std::isfinite(period)) throw std::invalid_argument("grid period must be positive");
  if (points < 16 || !is_power_of_two(points)) {
    throw std::invalid_argument("grid points per dimension must be a power of two >= 16");
  }
}

double GridSpec::cell_volume() const { return dim == 2 ? spacing() * spacing() : spacing(); }

Point GridSpec::node(std::size_t index) const {
  if (dim == 1) return {coordinate(index), 0.0};
  return {coordinate(index / points), coordinate(index % points)};
}

double GridSpec::radius(std::size_t index) const { return norm(node(index), dim); }

GridField::GridField(GridSpec spec, std::vector<double> values) : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size()) throw std::invalid_argument("grid field size does not match its spec");
}

GridField GridField::constant(GridSpec spec, double value) {
  return GridField(spec, std::vector<double>(spec.size(), value));
}

double GridField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridField::mass() const { return spec_.cell_volume() * simd::sum(values_); }

bool fits_in_domain(const GaussianMixture& m, const GridSpec& spec) {
  double peak = 0.0;
  for (const auto& g : m.terms()) peak = std::max(peak, g.amplitude());
  for (const auto& g : m.terms()) {
    const double offset = std::max(std::abs(g.center()[0]), spec.dim == 2 ? std::abs(g.center()[1]) : 0.0);
    const double reach = 0.5 * spec.period - offset;
    if (reach <= 0.0) return false;
    if (g.amplitude() * std::exp(-g.decay() * reach * reach) >= kWraparoundTolerance * peak) return false;
  }
  return true;
}

double minimal_period(const GaussianMixture& m) {
  double peak = 0.0;
  for (const auto& g : m.terms()) peak = std::max(peak, g.amplitude());
  double period = 0.0;
  for (const auto& g : m.terms()) {
    const double offset = std::max(std::abs(g.center()[0]), std::abs(g.center()[1]));
    const double level = std::log(g.amplitude() / (kWraparoundTolerance * peak));
    const double reach = std::sqrt(std::max(level, 0.0) / g.decay());
    period = std::max(period, 2.0 * (offset + reach));
  }
  return period * (1.0 + 1e-9);
}

GridField sample_mixture(const GaussianMixture& m, const GridSpec& spec) {
  spec.validate();
  if (m.dim() != spec.dim) throw std::invalid_argument("sample_mixture: dimension mismatch");
  if (!fits_in_domain(m, spec)) throw std::domain_error("domain too small for support");
  return sample(spec, [&](const Point& x) { return m(x); });
}

GridField fft_convolve(const GridField& f, const GridField& g) {
  if (f.min() < 0.0 || g.min() < 0.0) throw std::invalid_argument("fft_convolve needs nonnegative inputs");
  GridField c = circular_fft(f, g);
  const double floor = -kClampTolerance * c.max_abs();
  for (double& v : c.mutable_values()) {
    if (v < 0.0) {
      if (v < floor) throw std::logic_error("fft_convolve produced a significantly negative value");
      v = 0.0;
    }
  }
  return c;
}

GridField fft_convolve_signed(const GridField& f, const GridField& g) { return circular_fft(f, g); }

GridField direct_convolve(const GridField& f, const GridField& g) {
  require_same_spec(f, g);
  const GridSpec& spec = f.spec();
  const std::size_t n = spec.points;
  const auto& kern = simd::active();
  std::vector<double> c(spec.size(), 0.0);
  if (spec.dim == 1) {
    const std::vector<double> r = reflected(f.values());
    for (std::size_t m = 0; m < n; ++m) c[m] = kern.dot(r.data() + n - m, g.values().data(), n);
  } else {
    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = reflected(f.values().subspan(i * n, n));
    for (std::size_t m1 = 0; m1 < n; ++m1) {
      for (std::size_t k1 = 0; k1 < n; ++k1) {
        const std::vector<double>& r = rows[(m1 + n - k1) % n];
        const double* grow = g.values().data() + k1 * n;
        for (std::size_t m2 = 0; m2 < n; ++m2) c[m1 * n + m2] += kern.dot(r.data() + n - m2, grow, n);
      }
    }
  }
  const double h = spec.cell_volume();
  for (double& v : c) v *= h;
  return GridField(spec, recenter(spec, c));
}

double grid_lp_norm(const GridField& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("grid_lp_norm: p must be positive");
  if (f.min() < 0.0) throw std::domain_error("grid_lp_norm of a field with negative values");
  double s = 0.0;
  if (p == 1.0) {
    s = simd::sum(f.values());
  } else if (p == 2.0) {
    s = simd::dot(f.values(), f.values());
  } else {
    for (double v : f.values()) s += std::pow(v, p);
  }
  return std::pow(f.spec().cell_volume() * s, 1.0 / p);
}

GridField pointwise_power(const GridField& f, double s) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (f[i] < 0.0) throw std::domain_error("pointwise_power of a negative value");
    v[i] = s == 1.0 ? f[i] : std::pow(f[i], s);
  }
  return GridField(f.spec(), std::move(v));
}

GridField heat_step(const GridField& f, double sigma, double dt) {
  if (sigma < 0.0) throw std::invalid_argument("heat_step: sigma must be nonnegative");
  if (!(dt > 0.0)) throw std::invalid_argument("heat_step: dt must be positive");
  if (sigma == 0.0) return f;
  const GridSpec& spec = f.spec();
  std::vector<double> z = forward(f);
  std::vector<double> mult(spec.size());
  for (std::size_t k = 0; k < mult.size(); ++k) mult[k] = std::exp(-sigma * kPi * dt * squared_frequency(k, spec));
  simd::active().complex_scale(z.data(), mult.data(), spec.size());
  return GridField(spec, inverse_real(spec, z));
}

SpectralDerivatives spectral_grad_laplacian(const GridField& f) {
  const GridSpec& spec = f.spec();
  const std::size_t n = spec.points;
  const std::vector<double> z = forward(f);

  std::vector<GridField> gradient;
  for (int axis = 0; axis < spec.dim; ++axis) {
    std::vector<double> dz(z.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const std::size_t j = spec.dim == 1 ? k : (axis == 0 ? k / n : k % n);
      const double c = (j == n / 2) ? 0.0 : 2.0 * kPi * frequency(j, spec);
      // (re + i im) * (i c)
      dz[2 * k] = -c * z[2 * k + 1];
      dz[2 * k + 1] = c * z[2 * k];
    }
    gradient.emplace_back(spec, inverse_real(spec, dz));
  }

  std::vector<double> lz = z;
  std::vector<double> symbol(spec.size());
  for (std::size_t k = 0; k < symbol.size(); ++k) symbol[k] = -4.0 * kPi * kPi * squared_frequency(k, spec);
  simd::active().complex_scale(lz.data(), symbol.data(), spec.size());
  return SpectralDerivatives{std::move(gradient), GridField(spec, inverse_real(spec, lz))};
}

GridField spectral_log_laplacian(const GridField& f) {
  const SpectralDerivatives d = spectral_grad_laplacian(f);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double g2 = 0.0;
    for (const auto& g : d.gradient) g2 += (g[i] / f[i]) * (g[i] / f[i]);
    out[i] = d.laplacian[i] / f[i] - g2;
  }
  return GridField(f.spec(), std::move(out));
}

std::vector<double> fourier_modulus(const GridField& f) {
  const std::vector<double> z = forward(f);
  const double h = f.spec().cell_volume();
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = h * std::hypot(z[2 * i], z[2 * i + 1]);
  return out;
}

std::string field_csv(const GridField& f, const std::string& experiment) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# experiment=" << experiment << '\n';
  os << (f.spec().dim == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Point x = f.spec().node(i);
    os << x[0] << ',';
    if (f.spec().dim == 2) os << x[1] << ',';
    os << f[i] << '\n';
  }
  return os.str();
}

}  // namespace heatflow
