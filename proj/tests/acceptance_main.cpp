// Runs every acceptance criterion once, prints one PASS/FAIL line each and
// exits nonzero when any fails. Optional: --threads N, --json PATH.
#include "scatlab/acceptance.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  scatlab::AcceptanceOptions opts;
  const char* json_path = nullptr;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--threads") == 0) {
      opts.threads = std::max(1, std::atoi(argv[i + 1]));
    } else if (std::strcmp(argv[i], "--json") == 0) {
      json_path = argv[i + 1];
    } else {
      std::cerr << "unknown option " << argv[i] << '\n';
      return 2;
    }
  }
  const auto results = scatlab::run_acceptance(opts, [](const scatlab::CriterionResult& r) {
    std::cout << scatlab::format_line(r) << std::endl;
  });
  int failed = 0;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& r : results) {
    failed += r.pass() ? 0 : 1;
    all.push_back(scatlab::to_json(r));
  }
  if (json_path) std::ofstream(json_path) << all.dump(2) << '\n';
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
