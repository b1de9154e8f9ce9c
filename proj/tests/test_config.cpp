#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "slitflow/config.hpp"
#include "slitflow/csv.hpp"
#include "slitflow/error.hpp"
#include "slitflow/scenarios.hpp"

using namespace slitflow;
namespace fs = std::filesystem;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "slitflow_unit" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("defaults and a full parse") {
  const ScenarioConfig d = parse_config_text("# nothing but a comment\n\n");
  CHECK(d.packet.slit_offset == 1.0);
  CHECK(d.packet.sigma0 == 0.2);
  CHECK(d.grid == UniformGrid(1, -13.0, 13.0, 261));
  CHECK(d.n_steps == 5000);
  CHECK(d.dt() == doctest::Approx(2e-4));
  CHECK(d.solver == SolverKind::schrodinger_fd);

  const ScenarioConfig c = parse_config_text(R"(
scenario = pair   # trailing comment
particles = 2
exchange_sign = -1
grid.lo = -6
grid.hi = 6
grid.n = 61
t_final = 0.5
n_steps = 1000
trajectory.starts = (1, -0.6); (-1.4, 1)
snapshots = 0.25, 0.5
mwls.width = 0.3
out.dir = somewhere
)");
  CHECK(c.scenario == "pair");
  CHECK(c.dim() == 2);
  CHECK(c.packet.exchange_sign == -1);
  CHECK(c.initial == FieldKind::two_particle);
  REQUIRE(c.trajectory_starts.size() == 2);
  CHECK(c.trajectory_starts[1][0] == -1.4);
  CHECK(c.trajectory_starts[1][1] == 1.0);
  CHECK(c.snapshot_times == std::vector<double>{0.25, 0.5});
  CHECK(c.mwls.weight_width.value() == 0.3);
  CHECK(c.out_dir == "somewhere");
}

TEST_CASE("errors carry the offending line") {
  CHECK(error_line("scenario = a\nbogus = 1\n") == 2);
  CHECK(error_line("grid.n = 101\n\ngrid.n = 201\n") == 3);
  CHECK(error_line("scenario = a\nno equals sign\n") == 2);
  CHECK(error_line("t_final = -1\n") == 1);
  CHECK(error_line("particles = 1\ngrid.n = 5\n") == 2);
  CHECK(error_line("grid.n = 12.5\n") == 1);
  CHECK(error_line("solver = magic\n") == 1);
  CHECK(error_line("\ntrajectory.starts = (20)\n") == 2);
  CHECK(error_line("snapshots = 2\n") == 1);
  CHECK(error_line("solver = hydro_euler\neuler.integrator = rk4\n") == 2);
  CHECK(error_line("particles = 2\ngrid.n = 61\nsolver = hydro_lagrange\n") == 3);
  CHECK(error_line("mwls.order = 5\nmwls.neighbors = 4\nsolver = hydro_lagrange\n") == 1);
  CHECK_THROWS_AS(load_config("/nonexistent/slitflow.cfg"), ConfigError);
}

TEST_CASE("bundled scenarios round-trip through text") {
  CHECK(bundled_scenarios().size() == 9);
  for (const auto& s : bundled_scenarios()) {
    CAPTURE(s.name);
    const ScenarioConfig c = scenario_config(s.name);
    CHECK(c.scenario == s.name);
    const ScenarioConfig again = parse_config_text(c.to_text());
    CHECK(again.to_text() == c.to_text());
    CHECK(again.grid == c.grid);
    CHECK(again.trajectory_starts == c.trajectory_starts);
    CHECK(again.snapshot_times == c.snapshot_times);
  }
  CHECK(find_scenario("nope") == nullptr);
  CHECK_THROWS_AS(scenario_config("nope"), InvalidArgument);
}

TEST_CASE("config files on disk") {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "run.cfg") << "scenario = disk\ngrid.n = 101\n";
  CHECK(load_config(dir / "run.cfg").grid.points_per_axis() == 101);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0, 3.507987240796890}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(std::isnan(parse_double(format_double(std::numeric_limits<double>::quiet_NaN()))));
  CHECK_THROWS_AS(parse_double("1.5x"), InvalidArgument);
  CHECK_THROWS_AS(parse_double(""), InvalidArgument);
}

TEST_CASE("csv write and read") {
  const fs::path path = scratch("csv") / "t.csv";
  {
    CsvWriter w(path, {"t", "y", "provenance"});
    w.cell(0.0).cell(1.0 / 3.0).cell("fd").end_row();
    w.cell(0.5).cell(-2.0).cell("exact").end_row();
  }
  const CsvTable t = read_csv(path);
  CHECK(t.header == std::vector<std::string>{"t", "y", "provenance"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.number(0, "y") == 1.0 / 3.0);
  CHECK(t.rows[1][2] == "exact");
  CHECK_THROWS_AS(t.column("missing"), InvalidArgument);
}
