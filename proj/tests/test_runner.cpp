#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "slitflow/config.hpp"
#include "slitflow/csv.hpp"
#include "slitflow/runner.hpp"

using namespace slitflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "slitflow_unit" / name;
  fs::remove_all(dir);
  return dir;
}

const char* kTiny = R"(
scenario = tiny
grid.lo = -6
grid.hi = 6
grid.n = 121
t_final = 0.05
n_steps = 250
snapshots = 0, 0.025
trajectory.starts = (-1); (1)
)";

}  // namespace

TEST_CASE("a small grid run writes a complete, comparable record") {
  const fs::path dir = scratch("tiny");
  const RunOutcome out = run(parse_config_text(kTiny), dir);
  CHECK(out.status == RunOutcomeStatus::valid);
  CHECK(out.exit_code() == 0);
  REQUIRE(fs::exists(out.manifest));

  const auto manifest = nlohmann::json::parse(std::ifstream(out.manifest));
  CHECK(manifest.at("status") == "Valid");
  CHECK(manifest.at("exit_code") == 0);
  CHECK(manifest.at("scenario") == "tiny");
  CHECK(manifest.contains("trajectory_time_interpolation"));
  int fields = 0, trajectories = 0;
  for (const auto& f : manifest.at("files")) {
    CHECK(fs::exists(dir / f.at("path").get<std::string>()));
    fields += f.at("kind") == "field_snapshot" ? 1 : 0;
    trajectories += f.at("kind") == "trajectory" ? 1 : 0;
  }
  CHECK(fields == 3);        // t = 0, 0.025 and t_final
  CHECK(trajectories == 4);  // fd and exact companion for each start
  CHECK(fs::exists(dir / "plot.gp"));

  const CompareOutcome cmp = compare(out.manifest);
  CHECK(fs::exists(cmp.summary_path));
  CHECK(cmp.max_field_error > 0.0);
  CHECK(cmp.max_field_error < 2e-2);
  CHECK(cmp.max_trajectory_deviation < 1e-2);

  const CsvTable rows = read_csv(cmp.csv);
  bool saw_initial = false, saw_exact = false;
  for (std::size_t r = 0; r < rows.rows.size(); ++r) {
    const std::string file = rows.rows[r][rows.column("file")];
    if (rows.rows[r][rows.column("kind")] == "field_snapshot" && rows.number(r, "t") == 0.0) {
      saw_initial = true;
      CHECK(rows.number(r, "max_error") == 0.0);  // sampled from the oracle itself
    }
    if (file.find("_exact") != std::string::npos) {
      saw_exact = true;
      CHECK(rows.number(r, "max_error") == 0.0);
    }
  }
  CHECK(saw_initial);
  CHECK(saw_exact);
}

TEST_CASE("trajectory failures degrade a run") {
  // The far tail at t = 0 is below the node threshold, so this start is
  // masked from the outset.
  std::string text = kTiny;
  text += "scenario = tail\n";
  text.replace(text.find("scenario = tiny\n"), 16, "");
  text.replace(text.find("(-1); (1)"), 9, "(-1); (5.5)");
  const RunOutcome out = run(parse_config_text(text), scratch("tail"));
  CHECK(out.status == RunOutcomeStatus::degraded);
  CHECK(out.exit_code() == 2);
  CHECK(out.reason.find("trajector") != std::string::npos);
}

TEST_CASE("an unstable run fails with exit code 1") {
  std::string text = kTiny;
  text.replace(text.find("n_steps = 250"), 13, "n_steps = 3");
  const RunOutcome out = run(parse_config_text(text), scratch("unstable"));
  CHECK(out.status == RunOutcomeStatus::failed);
  CHECK(out.exit_code() == 1);
  CHECK(fs::exists(out.manifest));
}

TEST_CASE("output directory override") {
  ScenarioConfig c = parse_config_text(kTiny);
  c.out_dir = "configured";
  unsetenv(kOutDirEnv);
  CHECK(output_root(c) == fs::path("configured"));
  setenv(kOutDirEnv, "/tmp/elsewhere", 1);
  CHECK(output_root(c) == fs::path("/tmp/elsewhere"));
  unsetenv(kOutDirEnv);
}
