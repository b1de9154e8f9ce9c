#pragma once

// Scenario configuration: a flat text file of `key = value` lines with `#`
// comments. Recognised keys:
//
//   scenario, particles, exchange_sign, packet.Y, packet.sigma0, packet.kx,
//   grid.lo, grid.hi, grid.n, t_final, n_steps,
//   solver            schrodinger_fd | hydro_lagrange | hydro_euler
//   mwls.neighbors, mwls.order, mwls.width (number or "auto")
//   trajectory.starts semicolon-separated tuples, e.g. "(1, -0.6); (1, -1.4)"
//   snapshots         comma-separated times
//   out.dir
//
// Hydrodynamic runs additionally accept:
//   initial           interference | single_slit
//   hydro.layout      uniform | slits      (slits: points within
//   hydro.slit_halfwidth                    +-halfwidth of each slit only)
//   euler.engine      mwls | stencil
//   euler.integrator  euler | rk4          (rk4 requires the stencil engine)
//   study             none | initial_q     (initial_q: quantum potential
//   study.orders      comma-separated       error for each listed order)
//   baseline          none | schrodinger_fd (fd run at matched resolution)

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "slitflow/analytic.hpp"
#include "slitflow/core.hpp"
#include "slitflow/mwls.hpp"

namespace slitflow {

enum class SolverKind { schrodinger_fd, hydro_lagrange, hydro_euler };
enum class HydroLayout { uniform, slits };
enum class EulerEngine { mwls, stencil };
enum class TimeIntegrator { euler, rk4 };
enum class Study { none, initial_q };

std::string_view to_string(SolverKind s);

struct ScenarioConfig {
  std::string scenario = "custom";
  WavePacketParams packet;
  UniformGrid grid{1, -13.0, 13.0, 261};
  double t_final = 1.0;
  std::size_t n_steps = 5000;
  SolverKind solver = SolverKind::schrodinger_fd;
  std::vector<Coord> trajectory_starts;
  MwlsConfig mwls;
  std::vector<double> snapshot_times;
  std::string out_dir = "out";

  FieldKind initial = FieldKind::one_particle;
  HydroLayout layout = HydroLayout::uniform;
  double slit_halfwidth = 0.5;
  EulerEngine euler_engine = EulerEngine::mwls;
  TimeIntegrator euler_integrator = TimeIntegrator::euler;
  Study study = Study::none;
  std::vector<int> study_orders;
  bool fd_baseline = false;

  double dt() const { return t_final / static_cast<double>(n_steps); }
  int dim() const { return grid.dim(); }
  ExactField exact_field() const { return ExactField(packet, initial); }

  /// Throws ConfigError (line 0) when the combination is invalid.
  void validate() const;

  /// Canonical text form; parse_config(to_text()) reproduces the config.
  std::string to_text() const;
};

/// Parses and validates a configuration. Errors carry the offending line.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_text(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace slitflow
