#pragma once

// Grid sizing for power-convolution functionals of Gaussian-mixture heat flows.
//
// For fields f_j = u_j^{s_j} convolved left to right and raised to the power
// p, the period is chosen so that every factor, every partial convolution and
// the final integrand decay below exp(-tail_exponent) at the box edge at the
// largest time, and the spacing so that every convolution integrand (decay
// a + b for factors of decay a and b) satisfies decay * h^2 <= pi^2 /
// resolution_exponent at the smallest time. The trapezoidal rule on such a
// Gaussian is then accurate to about exp(-resolution_exponent).

#include <cstddef>
#include <span>

#include "heatflow/gaussian.hpp"
#include "heatflow/grid.hpp"

namespace heatflow {

struct GridPlanOptions {
  std::size_t min_points = 64;
  std::size_t max_points = std::size_t{1} << 16;
  double tail_exponent = 36.0;
  double resolution_exponent = 36.0;
};

/// Throws std::domain_error when the required grid exceeds max_points.
GridSpec plan_grid(std::span<const HeatFlow> flows, std::span<const double> powers, double p, double t_min,
                   double t_max, const GridPlanOptions& options = {});

}  // namespace heatflow
