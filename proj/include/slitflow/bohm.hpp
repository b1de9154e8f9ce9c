#pragma once

// Bohmian trajectories from sampled wave functions: v = Im(grad psi / psi),
// interpolated in space by local cubics and in time linearly between
// consecutive fields of the propagation lattice.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slitflow/analytic.hpp"
#include "slitflow/core.hpp"
#include "slitflow/field_source.hpp"

namespace slitflow {

struct VelocityField {
  UniformGrid grid;
  std::vector<Coord> velocity;
  std::vector<std::uint8_t> masked;  ///< 1 where the density is below the node threshold
};

/// (re grad im - im grad re) / |psi|^2 with fourth-order first derivatives.
/// Points with |psi|^2 < kNodeEpsilon * max |psi|^2 are masked.
VelocityField velocity_field(const ComplexField& field);

/// Cubic Lagrange interpolation per axis on the four nearest grid lines,
/// restricted to unmasked nodes. Throws MaskedRegion (time 0) when the
/// stencil is majority-masked and InvalidArgument outside the grid.
Coord interpolate_velocity(const VelocityField& vf, const Coord& r);

/// Exact field sampled on a grid at t_k = k * dt.
class ExactFieldSource : public FieldSource {
 public:
  ExactFieldSource(ExactField field, UniformGrid grid, double dt);
  double step_size() const override { return dt_; }
  double time() const override { return static_cast<double>(steps_) * dt_; }
  const ComplexField& current() const override { return current_; }
  void advance() override;

 private:
  ExactField field_;
  UniformGrid grid_;
  double dt_;
  std::size_t steps_ = 0;
  ComplexField current_;
};

struct TrajectoryFailure {
  double time = 0.0;
  std::string reason;
};

/// Advances a set of trajectories alongside a field propagation. Each call
/// to advance() takes one RK4 step over [t, t_next] with the velocity
/// linearly interpolated in time between the two fields. A trajectory that
/// hits a masked region or leaves the grid stops and records the failure;
/// the others continue.
class TrajectoryIntegrator {
 public:
  TrajectoryIntegrator(std::vector<Coord> starts, const ComplexField& field, double t,
                       Provenance provenance);

  void advance(const ComplexField& next, double t_next);

  double time() const noexcept { return t_; }
  const std::vector<Trajectory>& trajectories() const noexcept { return trajectories_; }
  const std::vector<std::optional<TrajectoryFailure>>& failures() const noexcept {
    return failures_;
  }

 private:
  int dim_;
  double t_;
  VelocityField current_;
  std::vector<Trajectory> trajectories_;
  std::vector<std::optional<TrajectoryFailure>> failures_;
};

/// Integrates one trajectory from t0 to t1 while advancing the source, whose
/// step must equal dt and whose current time must be t0. Throws MaskedRegion
/// with the time of incursion.
Trajectory integrate_trajectory(FieldSource& source, const Coord& start, double t0, double t1,
                                double dt, Provenance provenance = Provenance::fd);

struct CrossingViolation {
  std::size_t first;
  std::size_t second;
  double t;
};

struct CrossingReport {
  std::vector<CrossingViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// 1D: every pair adjacent in the initial ordering must stay strictly
/// ordered. 2D: no two trajectories may come within `coincidence_radius` of
/// each other at the same time index. Only the first violation of each pair
/// is reported. Trajectories of different length are compared over their
/// common prefix.
CrossingReport crossing_report(std::span<const Trajectory> trajectories,
                               double coincidence_radius = 0.0);

}  // namespace slitflow
