#pragma once

// Direct integration of the time-dependent Schrodinger equation split into
// real and imaginary parts:
//   d(re)/dt = -1/2 lap(im) + V im
//   d(im)/dt =  1/2 lap(re) - V re
// with fourth-order spatial stencils and classical RK4 in time.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "slitflow/core.hpp"
#include "slitflow/field_source.hpp"

namespace slitflow {

struct ScenarioConfig;

/// Wave function, time and external potential (one value per grid point).
struct FdState {
  explicit FdState(ComplexField f, double time = 0.0);
  FdState(ComplexField f, double time, std::vector<double> v);

  ComplexField field;
  double t = 0.0;
  std::vector<double> potential;
};

struct FdDerivative {
  std::vector<double> d_re;
  std::vector<double> d_im;
};

/// Time derivative of the split equations at the given state.
FdDerivative rhs(const FdState& state);

/// Reusable RK4 integrator; owns the stage buffers so repeated steps do not
/// allocate.
class SchrodingerStepper {
 public:
  explicit SchrodingerStepper(const UniformGrid& grid);

  void step(FdState& state, double dt);

 private:
  void evaluate(const std::vector<double>& re, const std::vector<double>& im,
                const std::vector<double>& potential, std::vector<double>& d_re,
                std::vector<double>& d_im) const;

  UniformGrid grid_;
  std::vector<double> k_re_[4];
  std::vector<double> k_im_[4];
  std::vector<double> tmp_re_;
  std::vector<double> tmp_im_;
};

/// One classical RK4 step of size dt (> 0).
FdState rk4_step(const FdState& state, double dt);

/// Relative norm drift tolerated before a run is declared unstable.
inline constexpr double kNormDriftTolerance = 1e-6;

/// Field source backed by the RK4 solver.
class SchrodingerFieldSource : public FieldSource {
 public:
  SchrodingerFieldSource(FdState initial, double dt);

  double step_size() const override { return dt_; }
  double time() const override { return state_.t; }
  const ComplexField& current() const override { return state_.field; }
  void advance() override;

  const FdState& state() const noexcept { return state_; }
  std::size_t steps_taken() const noexcept { return steps_; }

 private:
  FdState state_;
  SchrodingerStepper stepper_;
  double dt_;
  std::size_t steps_ = 0;
};

struct FieldSnapshot {
  double t;
  ComplexField field;
};

/// Lattice step indices at which the requested snapshot times are recorded.
/// t_final (step n_steps) is always included; step 0 is included when a
/// requested time rounds to it.
std::vector<std::size_t> snapshot_steps(std::span<const double> times, double dt,
                                        std::size_t n_steps);

/// Propagates a state for n_steps of size dt, recording snapshots. Throws
/// NormDrift when |norm(t) - norm(0)| exceeds kNormDriftTolerance at a
/// snapshot or at any of the periodic checkpoints. The observer, when set,
/// is called after every step.
std::vector<FieldSnapshot> propagate(FdState initial, double dt, std::size_t n_steps,
                                     std::span<const double> snapshot_times,
                                     const std::function<void(const FdState&)>& observer = {});

/// Runs a schrodinger_fd scenario from the exact initial field.
std::vector<FieldSnapshot> propagate(const ScenarioConfig& config);

}  // namespace slitflow
