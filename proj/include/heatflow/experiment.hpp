#pragma once

// Runs one configured experiment and writes <name>.<mode>.csv.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatflow/config.hpp"
#include "heatflow/grid.hpp"

namespace heatflow {

struct RunOutcome {
  bool pass = true;
  std::vector<std::filesystem::path> files;
  GridSpec grid;
};

/// Raised when an output file cannot be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `log` receives a short human-readable summary. Mode verify is not handled
/// here.
RunOutcome run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace heatflow
