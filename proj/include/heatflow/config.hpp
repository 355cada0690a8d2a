#pragma once

// Line-oriented experiment configuration:
//
//   name = pair
//   mode = qcurve
//   p = 4/3, 4/3
//   t_min = 0.01
//   [flow]
//   atom = 1.0, -0.5
//   [flow]
//   gaussian = 1.0, 2.0, 0.3
//
// '#' starts a comment. Numbers may be written as fractions (4/3).

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "heatflow/exponents.hpp"
#include "heatflow/gaussian.hpp"

namespace heatflow {

enum class Mode { qcurve, qprime, residual, weighted, lemma, hausdorff_young, limits, constants, verify };
enum class Spacing { log, linear };

std::string_view mode_name(Mode m);
/// Throws std::invalid_argument for an unknown name.
Mode parse_mode(std::string_view name);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct FlowConfig {
  std::vector<Atom> atoms;
  std::vector<IsotropicGaussian> gaussians;
  FlowDatum datum(int dim) const;
};

struct ExperimentSpec {
  std::string name = "experiment";
  Mode mode = Mode::qcurve;
  int dimension = 1;
  std::optional<double> period;  // L; planned from the data when absent
  std::size_t points = 256;      // N; raised by the planner when L is absent
  bool points_given = false;

  std::vector<double> p_list;
  std::optional<double> p_target;
  std::optional<std::array<double, 2>> alpha;
  std::optional<std::array<double, 2>> rho;
  std::optional<std::array<double, 2>> lambda;
  std::vector<double> sigma;  // overrides the canonical rates when present
  double beta = 0.0;

  std::vector<FlowConfig> flows;

  double t_min = 0.1;
  double t_max = 10.0;
  std::size_t count = 32;
  Spacing spacing = Spacing::log;
  std::vector<double> times;  // explicit probe times, else the time grid
  std::optional<double> tolerance;
  Point x{0.0, 0.0};
  bool dump_fields = false;

  /// Exponent tuple, present whenever p is given.
  std::optional<ExponentTuple> exponents;

  std::vector<double> time_grid() const;
  std::vector<FlowDatum> initial_data() const;
  /// Single line "key=value ..." with every resolved setting.
  std::string echo() const;
};

/// Parses and validates. Throws ConfigError with the offending line number.
/// When `mode` is given it is the default, and a conflicting mode key is an
/// error.
ExperimentSpec parse_config(std::string_view text, std::optional<Mode> mode = std::nullopt);

/// Reads a number such as "0.25", "-3", "4/3" or "1e-2".
std::optional<double> parse_number(std::string_view text);

}  // namespace heatflow
