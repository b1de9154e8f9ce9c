#pragma once

// Quantum hydrodynamics with psi = exp(g + iS), P = exp(2g), v = grad S.
//
// Lagrange's viewpoint moves the points with the flow (forward Euler):
//   r <- r + dt v
//   v <- v - dt grad(Q + V)
//   g <- g - dt/2 div v
// Euler's viewpoint keeps the grid fixed and adds the advective terms:
//   v <- v - dt grad(Q + V) - dt (v . grad) v
//   g <- g - dt/2 div v - dt v . grad g
// with Q = -1/2 [ (grad g)^2 + lap g ].
//
// Spatial derivatives come from moving weighted least squares (or, in
// Euler's viewpoint, optionally from the fourth-order grid stencils).

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slitflow/analytic.hpp"
#include "slitflow/core.hpp"
#include "slitflow/mwls.hpp"

namespace slitflow {

struct ScenarioConfig;

/// External potential V(r); an empty function means V = 0.
using ScalarPotential = std::function<double(const Coord&)>;

enum class RunStatus { valid, degraded };

std::string_view to_string(RunStatus s);

/// Hydrodynamic state on a (possibly moving) point set.
struct FluidEnsemble {
  int dim = 1;
  double t = 0.0;
  std::vector<Coord> positions;
  std::vector<Coord> velocities;
  std::vector<double> log_amplitude;  ///< g = ln sqrt(P)

  std::size_t size() const noexcept { return positions.size(); }
};

/// g = ln|psi(r, 0)| and v = exact velocity at each point. Throws NodeError
/// when a point sits at a node.
FluidEnsemble init_from_exact(const ExactField& field, std::span<const Coord> points);

/// Uniform points on [lo, hi] (1D).
std::vector<Coord> uniform_points(double lo, double hi, std::size_t n);

/// Quantum potential at every point from MWLS jets of g.
std::vector<double> quantum_potential(const FluidEnsemble& ensemble, const MwlsConfig& config);

struct HydroStep {
  FluidEnsemble ensemble;
  std::vector<double> quantum_potential;  ///< Q at the positions before the step
  RunStatus status = RunStatus::valid;
  std::string reason;
};

/// One forward-Euler step in Lagrange's viewpoint. Fit failures propagate
/// as IllConditioned / TooFewPoints; point-order violations (1D) and
/// non-finite values yield a degraded status.
HydroStep lagrangian_step(const FluidEnsemble& ensemble, double dt, const MwlsConfig& config,
                          const ScalarPotential& potential = {});

/// Gradient and Laplacian of a scalar sampled on a fixed point set.
struct ScalarDerivatives {
  std::vector<Coord> gradient;
  std::vector<double> laplacian;
};

class DerivativeEngine {
 public:
  virtual ~DerivativeEngine() = default;
  virtual ScalarDerivatives derivatives(std::span<const double> values) const = 0;
};

/// MWLS derivatives on a fixed point set; every local normal matrix is
/// factorized once at construction.
class MwlsEngine : public DerivativeEngine {
 public:
  MwlsEngine(std::vector<Coord> points, int dim, const MwlsConfig& config);
  ScalarDerivatives derivatives(std::span<const double> values) const override;

 private:
  std::vector<Coord> points_;
  int dim_;
  std::vector<LocalFit> fits_;
};

/// Fourth-order grid stencils.
class StencilEngine : public DerivativeEngine {
 public:
  explicit StencilEngine(const UniformGrid& grid) : grid_(grid) {}
  ScalarDerivatives derivatives(std::span<const double> values) const override;

 private:
  UniformGrid grid_;
};

/// Hydrodynamic fields on a fixed grid (Euler's viewpoint).
struct EulerianFields {
  UniformGrid grid;
  double t = 0.0;
  std::vector<Coord> velocities;
  std::vector<double> log_amplitude;
};

EulerianFields eulerian_from_exact(const ExactField& field, const UniformGrid& grid);

struct EulerianStep {
  EulerianFields fields;
  std::vector<double> quantum_potential;
  RunStatus status = RunStatus::valid;
  std::string reason;
};

/// One forward-Euler step of the fixed-grid equations.
EulerianStep eulerian_step(const EulerianFields& fields, double dt, const DerivativeEngine& engine,
                           const ScalarPotential& potential = {});

/// One classical RK4 step of the same equations; intended for the stencil
/// engine, whose derivatives do not change form between stages.
EulerianStep eulerian_rk4_step(const EulerianFields& fields, double dt,
                               const DerivativeEngine& engine,
                               const ScalarPotential& potential = {});

/// Per-point comparison against the exact solution at one time.
struct HydroDiagnostics {
  double t = 0.0;
  std::vector<double> position;
  std::vector<double> v_num;
  std::vector<double> v_exact;  ///< NaN where the exact velocity is undefined
  std::vector<double> q_num;
  std::vector<double> q_exact;
  double max_velocity_error = 0.0;
  double max_q_error = 0.0;
  RunStatus status = RunStatus::valid;

  /// Max |v_num - v_exact| over points with |y| <= half_width.
  double max_velocity_error_within(double half_width) const;
  double max_velocity_error_outside(double half_width) const;
};

HydroDiagnostics diagnose(const ExactField& exact, double t, std::span<const Coord> positions,
                          std::span<const Coord> velocities, std::span<const double> q,
                          RunStatus status);

struct HydroRun {
  std::vector<FluidEnsemble> snapshots;
  std::vector<HydroDiagnostics> diagnostics;
  std::vector<Trajectory> trajectories;  ///< Lagrangian paths of the tracked points
  RunStatus status = RunStatus::valid;
  std::string reason;
  std::optional<double> degraded_at;
};

/// Initial point layout for a hydrodynamic scenario.
std::vector<Coord> initial_points(const ScenarioConfig& config);

/// Runs a hydro_lagrange or hydro_euler scenario. Physical breakdown is
/// reported through the status, not by throwing.
HydroRun propagate_hydro(const ScenarioConfig& config);

}  // namespace slitflow
