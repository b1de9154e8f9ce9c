#pragma once

// End-to-end scenario execution: runs a configured solver, compares it
// with the closed-form solution and writes CSV data, a gnuplot script and a
// JSON manifest describing every file.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slitflow/analytic.hpp"
#include "slitflow/bohm.hpp"
#include "slitflow/config.hpp"
#include "slitflow/fd_solver.hpp"
#include "slitflow/hydro.hpp"

namespace slitflow {

/// Environment variable that overrides out.dir.
inline constexpr const char* kOutDirEnv = "SLITFLOW_OUT_DIR";

struct FieldError {
  double max = 0.0;
  double rms = 0.0;
};

/// Pointwise |psi_num - psi_exact| over the grid of `numeric`.
FieldError field_error(const ComplexField& numeric, const ExactField& exact, double t);

/// Grid-solver run with trajectories integrated alongside.
struct FdRun {
  std::vector<FieldSnapshot> snapshots;
  std::vector<Trajectory> trajectories;
  std::vector<std::optional<TrajectoryFailure>> failures;
  double max_norm_drift = 0.0;
};

/// Propagates config (solver schrodinger_fd semantics, whatever the
/// configured solver) from the exact initial field on config.grid. Norm
/// drift is checked at snapshots and at 100 evenly spaced checkpoints;
/// NormDrift is thrown past kNormDriftTolerance. The observer sees every
/// step.
FdRun run_fd(const ScenarioConfig& config,
             const std::function<void(std::size_t, const FdState&)>& observer = {});

/// Velocity and quantum potential of a gridded field against the exact
/// values (1D). Masked points get NaN for v_num.
HydroDiagnostics fd_diagnostics(const ComplexField& field, const ExactField& exact, double t);

/// Error of the MWLS quantum potential at t = 0 for one polynomial order.
struct InitialQStudy {
  int order = 0;
  std::vector<double> position;
  std::vector<double> q_exact;
  std::vector<double> q_num;
  double near_node_max_error = 0.0;     ///< over |y| <= 0.2
  double far_max_relative_error = 0.0;  ///< over |y| >= 0.5
};

std::vector<InitialQStudy> initial_q_study(const ScenarioConfig& config);

enum class RunOutcomeStatus { valid, degraded, failed };

struct RunOutcome {
  RunOutcomeStatus status = RunOutcomeStatus::valid;
  std::string reason;
  std::filesystem::path directory;
  std::filesystem::path manifest;
  std::string summary;

  /// 0 valid, 2 degraded, 1 failed.
  int exit_code() const noexcept;
};

/// out.dir, or the environment override when set.
std::filesystem::path output_root(const ScenarioConfig& config);

/// Runs the scenario and writes its files into `directory`.
RunOutcome run(const ScenarioConfig& config, const std::filesystem::path& directory);
/// Same, into output_root(config) / config.scenario.
RunOutcome run(const ScenarioConfig& config);

struct CompareOutcome {
  std::filesystem::path csv;
  std::filesystem::path summary_path;
  std::string summary;
  double max_field_error = 0.0;
  double max_trajectory_deviation = 0.0;
  double max_velocity_error = 0.0;
};

/// Recomputes every error in a run directory against the exact solution
/// and writes compare_exact.csv and compare_exact.txt next to the manifest.
CompareOutcome compare(const std::filesystem::path& manifest);

}  // namespace slitflow
