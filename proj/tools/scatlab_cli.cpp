// Command line runner: one experiment per invocation, or `all` for the
// acceptance suite. Exit codes: 0 pass, 1 residual over tolerance, 2 bad
// arguments or config, 3 scenario error, 4 numerical failure.

#include "scatlab/acceptance.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace scatlab;

enum Exit { kPass = 0, kResidual = 1, kParse = 2, kScenario = 3, kNumerical = 4 };

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_text(out_path, j.dump(2) + "\n");
  }
}

int run_all(const RunConfig& cfg, const std::string& out_path) {
  AcceptanceOptions opts;
  opts.threads = cfg.threads;
  opts.seed = cfg.seed;
  opts.connect = cfg.connect;
  const auto results = run_acceptance(opts, [](const CriterionResult& r) {
    std::cout << format_line(r) << std::endl;
  });
  nlohmann::json criteria = nlohmann::json::array();
  bool pass = true;
  for (const auto& r : results) {
    criteria.push_back(to_json(r));
    pass = pass && r.pass();
  }
  if (!out_path.empty()) {
    write_text(out_path, nlohmann::json{{"schema_version", kSchemaVersion},
                                        {"experiment", "all"},
                                        {"seed", cfg.seed},
                                        {"criteria", criteria},
                                        {"pass", pass}}
                                 .dump(2) +
                             "\n");
  }
  std::cout << (pass ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
  return pass ? kPass : kResidual;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering-rigidity numerics runner"};
  std::string command, config_path, out_path, csv_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  std::vector<std::string> choices = experiment_names();
  choices.push_back("all");
  app.add_option("command", command, "experiment to run")->required()->check(CLI::IsMember(choices));
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_path, "report path (stdout when omitted)");
  app.add_option("--csv", csv_path, "optional flat CSV of the records");
  app.add_option("--seed", seed, "seed for randomized test fields");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (command == "all") return run_all(cfg, out_path);

    const ExperimentReport rep = run_experiment(command, cfg);
    emit(to_json(rep), out_path);
    if (!csv_path.empty()) write_text(csv_path, to_csv(rep));
    if (!rep.pass) {
      std::cerr << command << ": max residual " << rep.max_residual << " exceeds "
                << rep.tolerance << " or a check failed\n";
      return kResidual;
    }
    return kPass;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kParse;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kScenario;
  } catch (const RecordFailure& e) {
    std::cerr << "numerical failure in " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
