#pragma once

// The acceptance battery: one row per criterion with the measured quantity,
// its expected value, the tolerance and the verdict.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace heatflow {

struct AcceptanceOptions {
  // N = 64 for fixed grids, looser grid planning, tolerances x100.
  bool coarse = false;
};

struct CriterionResult {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

const std::vector<std::string>& criterion_names();

/// Criterion `index` (0-based).
CriterionResult run_criterion(std::size_t index, const AcceptanceOptions& options = {});

/// Runs every criterion; rows are printed to `out` as they finish when it is
/// non-null.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {}, std::ostream* out = nullptr);

std::string format_row(const CriterionResult& r);
std::string table_header();

}  // namespace heatflow
