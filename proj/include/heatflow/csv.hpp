#pragma once

#include <span>
#include <string>

namespace heatflow {

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

/// Comma-joined format_number values.
std::string join_numbers(std::span<const double> values);

}  // namespace heatflow
