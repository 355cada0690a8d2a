// One line per acceptance criterion; exit status 1 if any fails.

#include <cstring>
#include <iostream>

#include "heatflow/acceptance.hpp"

int main(int argc, char** argv) {
  heatflow::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--coarse") == 0) opt.coarse = true;
  const auto rows = heatflow::run_acceptance(opt, &std::cout);
  int failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  std::cout << rows.size() - failed << "/" << rows.size() << " acceptance criteria passed\n";
  return failed == 0 ? 0 : 1;
}
