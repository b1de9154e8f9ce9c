// slitflow command line: run scenarios, compare runs with the exact
// solution, list the bundled scenarios.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "slitflow/config.hpp"
#include "slitflow/error.hpp"
#include "slitflow/runner.hpp"
#include "slitflow/scenarios.hpp"

namespace {

slitflow::ScenarioConfig resolve(const std::string& what) {
  if (std::filesystem::exists(what)) return slitflow::load_config(what);
  if (slitflow::find_scenario(what) != nullptr) return slitflow::scenario_config(what);
  throw slitflow::ConfigError("no config file or bundled scenario named '" + what + "'", 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-slit interference: grid Schrodinger solver, quantum hydrodynamics and "
               "Bohmian trajectories checked against exact Gaussian packets"};
  app.require_subcommand(1);

  std::string target;
  auto* run_cmd = app.add_subcommand("run", "run a config file or a bundled scenario");
  run_cmd->add_option("config", target, "config file path or bundled scenario name")->required();

  std::string manifest;
  std::string oracle = "exact";
  auto* compare_cmd = app.add_subcommand("compare", "compare a finished run with an oracle");
  compare_cmd->add_option("manifest", manifest, "manifest.json of the run")->required();
  compare_cmd->add_option("--oracle", oracle, "reference solution")
      ->check(CLI::IsMember({"exact"}));

  auto* list_cmd = app.add_subcommand("list-scenarios", "list the bundled scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      for (const auto& s : slitflow::bundled_scenarios()) {
        std::cout << s.name << "  " << s.description << '\n';
      }
      return 0;
    }
    if (run_cmd->parsed()) {
      const slitflow::ScenarioConfig config = resolve(target);
      const slitflow::RunOutcome outcome = slitflow::run(config);
      std::cout << outcome.summary << "manifest " << outcome.manifest.string() << '\n';
      if (outcome.status == slitflow::RunOutcomeStatus::failed) {
        std::cerr << "error: " << outcome.reason << '\n';
      }
      return outcome.exit_code();
    }
    if (compare_cmd->parsed()) {
      const slitflow::CompareOutcome outcome = slitflow::compare(manifest);
      std::cout << outcome.summary << "written " << outcome.csv.string() << '\n';
      return 0;
    }
  } catch (const slitflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
