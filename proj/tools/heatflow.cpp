// heatflow <mode> --config <file> [--out <dir>] [--coarse] [--list]
//
// Exit status: 0 every check passed, 1 a check failed, 2 the run could not
// be carried out (unreadable config, invalid configuration, I/O failure).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "heatflow/acceptance.hpp"
#include "heatflow/config.hpp"
#include "heatflow/experiment.hpp"
#include "heatflow/simd/kernels.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kCannotRun = 2;

int verify(bool coarse, bool list) {
  if (list) {
    for (const auto& n : heatflow::criterion_names()) std::cout << n << '\n';
    return kPass;
  }
  std::cout << "simd: " << heatflow::simd::isa_name(heatflow::simd::active().isa)
            << (coarse ? ", coarse grids (N = 64, tolerances x100)" : "") << '\n';
  heatflow::AcceptanceOptions opt;
  opt.coarse = coarse;
  const auto rows = heatflow::run_acceptance(opt, &std::cout);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  std::cout << rows.size() - failed << "/" << rows.size() << " criteria passed\n";
  return failed == 0 ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-flow monotonicity experiments"};
  std::string mode_text;
  std::string config_path;
  std::string out_dir = ".";
  bool coarse = false;
  bool list = false;
  app.add_option("mode", mode_text,
                 "qcurve | qprime | residual | weighted | lemma | hausdorff_young | limits | constants | verify")
      ->required();
  app.add_option("--config", config_path, "experiment configuration file");
  app.add_option("--out", out_dir, "directory for CSV output");
  app.add_flag("--coarse", coarse, "verify: coarse grids with relaxed tolerances");
  app.add_flag("--list", list, "verify: print criterion names and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kCannotRun;
  }

  heatflow::Mode mode;
  try {
    mode = heatflow::parse_mode(mode_text);
  } catch (const std::invalid_argument& e) {
    std::cerr << "heatflow: " << e.what() << '\n';
    return kCannotRun;
  }
  if (mode == heatflow::Mode::verify) return verify(coarse, list);
  if (config_path.empty()) {
    std::cerr << "heatflow: --config is required for mode " << mode_text << '\n';
    return kCannotRun;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "heatflow: cannot read " << config_path << '\n';
    return kCannotRun;
  }
  std::stringstream text;
  text << in.rdbuf();

  try {
    const heatflow::ExperimentSpec spec = heatflow::parse_config(text.str(), mode);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      std::cerr << "heatflow: cannot create " << out_dir << ": " << ec.message() << '\n';
      return kCannotRun;
    }
    const heatflow::RunOutcome outcome = heatflow::run_experiment(spec, out_dir, std::cout);
    for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << '\n';
    return outcome.pass ? kPass : kFail;
  } catch (const heatflow::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return kCannotRun;
  } catch (const heatflow::OutputError& e) {
    std::cerr << "heatflow: " << e.what() << '\n';
    return kCannotRun;
  } catch (const std::exception& e) {
    std::cerr << "heatflow: " << e.what() << '\n';
    return kCannotRun;
  }
}
