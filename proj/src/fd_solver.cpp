#include "slitflow/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slitflow/analytic.hpp"
#include "slitflow/config.hpp"
#include "slitflow/error.hpp"
#include "slitflow/stencil.hpp"

namespace slitflow {

FdState::FdState(ComplexField f, double time)
    : field(std::move(f)), t(time), potential(field.grid.size(), 0.0) {}

FdState::FdState(ComplexField f, double time, std::vector<double> v)
    : field(std::move(f)), t(time), potential(std::move(v)) {
  if (potential.size() != field.grid.size()) {
    throw InvalidArgument("potential must hold one value per grid point");
  }
}

namespace {

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

FdDerivative rhs(const FdState& state) {
  const auto& grid = state.field.grid;
  FdDerivative d{std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  apply_laplacian(state.field.im, d.d_re, grid, -0.5);
  apply_laplacian(state.field.re, d.d_im, grid, 0.5);
  if (!all_zero(state.potential)) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      d.d_re[k] += state.potential[k] * state.field.im[k];
      d.d_im[k] -= state.potential[k] * state.field.re[k];
    }
  }
  return d;
}

SchrodingerStepper::SchrodingerStepper(const UniformGrid& grid)
    : grid_(grid), tmp_re_(grid.size()), tmp_im_(grid.size()) {
  for (int s = 0; s < 4; ++s) {
    k_re_[s].resize(grid.size());
    k_im_[s].resize(grid.size());
  }
}

void SchrodingerStepper::evaluate(const std::vector<double>& re, const std::vector<double>& im,
                                  const std::vector<double>& potential, std::vector<double>& d_re,
                                  std::vector<double>& d_im) const {
  apply_laplacian(im, d_re, grid_, -0.5);
  apply_laplacian(re, d_im, grid_, 0.5);
  if (!all_zero(potential)) {
    for (std::size_t k = 0; k < re.size(); ++k) {
      d_re[k] += potential[k] * im[k];
      d_im[k] -= potential[k] * re[k];
    }
  }
}

void SchrodingerStepper::step(FdState& state, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(state.field.grid == grid_)) throw InvalidArgument("state grid differs from stepper grid");
  auto& re = state.field.re;
  auto& im = state.field.im;
  const std::size_t size = re.size();

  evaluate(re, im, state.potential, k_re_[0], k_im_[0]);
  const double stage_dt[3] = {0.5 * dt, 0.5 * dt, dt};
  for (int s = 0; s < 3; ++s) {
    const double h = stage_dt[s];
    for (std::size_t k = 0; k < size; ++k) {
      tmp_re_[k] = re[k] + h * k_re_[s][k];
      tmp_im_[k] = im[k] + h * k_im_[s][k];
    }
    evaluate(tmp_re_, tmp_im_, state.potential, k_re_[s + 1], k_im_[s + 1]);
  }
  const double w = dt / 6.0;
  for (std::size_t k = 0; k < size; ++k) {
    re[k] += w * (k_re_[0][k] + 2.0 * k_re_[1][k] + 2.0 * k_re_[2][k] + k_re_[3][k]);
    im[k] += w * (k_im_[0][k] + 2.0 * k_im_[1][k] + 2.0 * k_im_[2][k] + k_im_[3][k]);
  }
  state.t += dt;
}

FdState rk4_step(const FdState& state, double dt) {
  FdState next = state;
  SchrodingerStepper(state.field.grid).step(next, dt);
  return next;
}

SchrodingerFieldSource::SchrodingerFieldSource(FdState initial, double dt)
    : state_(std::move(initial)), stepper_(state_.field.grid), dt_(dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
}

void SchrodingerFieldSource::advance() {
  stepper_.step(state_, dt_);
  ++steps_;
  // Accumulating t += dt drifts; pin the lattice time instead.
  state_.t = static_cast<double>(steps_) * dt_;
}

std::vector<std::size_t> snapshot_steps(std::span<const double> times, double dt,
                                        std::size_t n_steps) {
  std::vector<std::size_t> steps;
  for (double t : times) {
    const double k = std::round(t / dt);
    if (k < 0.0 || k > static_cast<double>(n_steps)) continue;
    steps.push_back(static_cast<std::size_t>(k));
  }
  steps.push_back(n_steps);
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

std::vector<FieldSnapshot> propagate(FdState initial, double dt, std::size_t n_steps,
                                     std::span<const double> snapshot_times,
                                     const std::function<void(const FdState&)>& observer) {
  if (n_steps == 0) throw InvalidArgument("n_steps must be at least 1");
  const double t0 = initial.t;
  const double norm0 = norm(initial.field);
  const auto wanted = snapshot_steps(snapshot_times, dt, n_steps);
  const std::size_t checkpoint = std::max<std::size_t>(1, n_steps / 100);

  std::vector<FieldSnapshot> out;
  auto check_norm = [&](const FdState& s) {
    const double drift = std::abs(norm(s.field) - norm0);
    if (!(drift <= kNormDriftTolerance)) {
      std::ostringstream msg;
      msg << "norm drift " << drift << " at t = " << s.t << " exceeds " << kNormDriftTolerance;
      throw NormDrift(msg.str(), s.t, drift);
    }
  };

  std::size_t next = 0;
  if (next < wanted.size() && wanted[next] == 0) {
    out.push_back({initial.t, initial.field});
    ++next;
  }
  FdState state = std::move(initial);
  SchrodingerStepper stepper(state.field.grid);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    stepper.step(state, dt);
    state.t = t0 + static_cast<double>(k) * dt;
    if (observer) observer(state);
    const bool snap = next < wanted.size() && wanted[next] == k;
    if (snap || k % checkpoint == 0) check_norm(state);
    if (snap) {
      out.push_back({state.t, state.field});
      ++next;
    }
  }
  return out;
}

std::vector<FieldSnapshot> propagate(const ScenarioConfig& config) {
  if (config.solver != SolverKind::schrodinger_fd) {
    throw InvalidArgument("propagate expects a schrodinger_fd scenario");
  }
  const ExactField exact = config.exact_field();
  FdState initial(sample_field(exact, config.grid, 0.0), 0.0);
  return propagate(std::move(initial), config.dt(), config.n_steps, config.snapshot_times);
}

}  // namespace slitflow
