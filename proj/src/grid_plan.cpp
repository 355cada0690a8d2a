#include "heatflow/grid_plan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatflow {

namespace {

struct Extent {
  double min_decay;  // widest term
  double max_decay;  // narrowest term
  double offset;     // largest |center| along an axis
};

Extent extent(const GaussianMixture& m) {
  Extent e{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (const auto& g : m.terms()) {
    e.min_decay = std::min(e.min_decay, g.decay());
    e.max_decay = std::max(e.max_decay, g.decay());
    e.offset = std::max({e.offset, std::abs(g.center()[0]), std::abs(g.center()[1])});
  }
  return e;
}

double combine(double a, double b) { return a * b / (a + b); }

}  // namespace

GridSpec plan_grid(std::span<const HeatFlow> flows, std::span<const double> powers, double p, double t_min,
                   double t_max, const GridPlanOptions& options) {
  if (flows.empty() || flows.size() != powers.size()) throw std::invalid_argument("plan_grid: one power per flow");
  if (!(t_min > 0.0) || t_max < t_min) throw std::invalid_argument("plan_grid: need 0 < t_min <= t_max");
  const int dim = datum_dim(flows.front().initial);

  const double tail = options.tail_exponent;
  const double h_limit = std::numbers::pi * std::numbers::pi / options.resolution_exponent;

  double half_period = 0.0;
  double max_integrand_decay = 0.0;
  auto need_reach = [&](double decay, double offset) {
    half_period = std::max(half_period, offset + std::sqrt(tail / decay));
  };

  double acc_wide = 0.0, acc_narrow = 0.0, acc_offset = 0.0;
  for (std::size_t j = 0; j < flows.size(); ++j) {
    const Extent late = extent(flows[j].at(t_max));
    const Extent early = extent(flows[j].at(t_min));
    const double s = powers[j];

    need_reach(late.min_decay, late.offset);
    need_reach(s * late.min_decay, late.offset);
    max_integrand_decay = std::max({max_integrand_decay, early.max_decay, s * early.max_decay});

    if (j == 0) {
      acc_wide = s * late.min_decay;
      acc_narrow = s * early.max_decay;
      acc_offset = late.offset;
    } else {
      max_integrand_decay = std::max(max_integrand_decay, acc_narrow + s * early.max_decay);
      acc_wide = combine(acc_wide, s * late.min_decay);
      acc_narrow = combine(acc_narrow, s * early.max_decay);
      acc_offset += late.offset;
      need_reach(acc_wide, acc_offset);
    }
  }
  need_reach(p * acc_wide, acc_offset);
  max_integrand_decay = std::max(max_integrand_decay, p * acc_narrow);

  GridSpec spec;
  spec.dim = dim;
  spec.period = 2.0 * half_period;
  const double h_max = std::sqrt(h_limit / max_integrand_decay);
  const double needed = std::ceil(spec.period / h_max);
  std::size_t n = options.min_points;
  while (static_cast<double>(n) < needed) {
    n *= 2;
    if (n > options.max_points) {
      throw std::domain_error("plan_grid: more than " + std::to_string(options.max_points) +
                              " points per dimension required");
    }
  }
  spec.points = n;
  spec.validate();
  return spec;
}

}  // namespace heatflow
