#include "slitflow/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "slitflow/config.hpp"
#include "slitflow/error.hpp"
#include "slitflow/fd_solver.hpp"
#include "slitflow/stencil.hpp"

namespace slitflow {

std::string_view to_string(RunStatus s) {
  return s == RunStatus::valid ? "Valid" : "Degraded";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool all_finite(const std::vector<Coord>& xs, int dim) {
  for (const Coord& x : xs) {
    for (int a = 0; a < dim; ++a) {
      if (!std::isfinite(x[a])) return false;
    }
  }
  return true;
}

bool all_finite(const std::vector<double>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

double potential_at(const ScalarPotential& potential, const Coord& r) {
  return potential ? potential(r) : 0.0;
}

std::vector<double> component(const std::vector<Coord>& xs, int a) {
  std::vector<double> out(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) out[k] = xs[k][a];
  return out;
}

std::vector<LocalFit> build_fits(std::span<const Coord> points, int dim, const MwlsConfig& config) {
  const NeighborFinder finder(points, dim);
  std::vector<LocalFit> fits;
  fits.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    fits.push_back(
        LocalFit::build(points, dim, points[i], config, finder.neighbors_of(i, config.neighbors)));
  }
  return fits;
}

double quantum_potential_from(const DerivativeJet& g, int dim) {
  double grad_sq = 0.0;
  for (int a = 0; a < dim; ++a) grad_sq += g.gradient[a] * g.gradient[a];
  return -0.5 * (grad_sq + g.laplacian);
}

// Index of the first adjacent pair (in the initial ordering) that has
// swapped or merged, if any.
std::optional<std::size_t> order_violation(const std::vector<Coord>& positions,
                                           const std::vector<std::size_t>& order) {
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!(positions[order[k - 1]][0] < positions[order[k]][0])) return order[k];
  }
  return std::nullopt;
}

std::vector<std::size_t> sorted_order(const std::vector<Coord>& positions) {
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return positions[a][0] < positions[b][0]; });
  return order;
}

}  // namespace

FluidEnsemble init_from_exact(const ExactField& field, std::span<const Coord> points) {
  FluidEnsemble e;
  e.dim = field.dim();
  e.positions.assign(points.begin(), points.end());
  e.velocities.resize(points.size());
  e.log_amplitude.resize(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    // Only exact zeros are rejected; deep Gaussian tails are representable.
    e.velocities[k] = exact_velocity(field, points[k], 0.0, 0.0);
    e.log_amplitude[k] = std::log(std::abs(field.psi(points[k], 0.0)));
    if (!std::isfinite(e.log_amplitude[k])) {
      throw NodeError("log amplitude is not representable at y = " + std::to_string(points[k][0]));
    }
  }
  return e;
}

std::vector<Coord> uniform_points(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw InvalidArgument("uniform_points needs n >= 2 and hi > lo");
  std::vector<Coord> pts(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) pts[k] = {lo + static_cast<double>(k) * h, 0.0};
  return pts;
}

std::vector<double> quantum_potential(const FluidEnsemble& ensemble, const MwlsConfig& config) {
  const auto fits = build_fits(ensemble.positions, ensemble.dim, config);
  std::vector<double> q(ensemble.size());
  for (std::size_t i = 0; i < fits.size(); ++i) {
    q[i] = quantum_potential_from(fits[i].jet(ensemble.log_amplitude), ensemble.dim);
  }
  return q;
}

HydroStep lagrangian_step(const FluidEnsemble& ensemble, double dt, const MwlsConfig& config,
                          const ScalarPotential& potential) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const int dim = ensemble.dim;
  const std::size_t n = ensemble.size();
  const auto fits = build_fits(ensemble.positions, dim, config);

  HydroStep out;
  out.quantum_potential.resize(n);
  std::vector<double> total(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.quantum_potential[i] = quantum_potential_from(fits[i].jet(ensemble.log_amplitude), dim);
    total[i] = out.quantum_potential[i] + potential_at(potential, ensemble.positions[i]);
  }
  std::vector<std::vector<double>> vel(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) vel[a] = component(ensemble.velocities, a);

  FluidEnsemble next = ensemble;
  next.t = ensemble.t + dt;
  for (std::size_t i = 0; i < n; ++i) {
    const DerivativeJet force = fits[i].jet(total);
    double div = 0.0;
    for (int a = 0; a < dim; ++a) div += fits[i].jet(vel[a]).gradient[a];
    for (int a = 0; a < dim; ++a) {
      next.positions[i][a] += dt * ensemble.velocities[i][a];
      next.velocities[i][a] -= dt * force.gradient[a];
    }
    next.log_amplitude[i] -= 0.5 * dt * div;
  }

  if (!all_finite(next.positions, dim) || !all_finite(next.velocities, dim) ||
      !all_finite(next.log_amplitude)) {
    out.status = RunStatus::degraded;
    out.reason = "non-finite hydrodynamic state at t = " + std::to_string(next.t);
  } else if (dim == 1) {
    if (auto bad = order_violation(next.positions, sorted_order(ensemble.positions))) {
      out.status = RunStatus::degraded;
      out.reason = "fluid points crossed near y = " + std::to_string(next.positions[*bad][0]) +
                   " at t = " + std::to_string(next.t);
    }
  }
  out.ensemble = std::move(next);
  return out;
}

MwlsEngine::MwlsEngine(std::vector<Coord> points, int dim, const MwlsConfig& config)
    : points_(std::move(points)), dim_(dim), fits_(build_fits(points_, dim, config)) {}

ScalarDerivatives MwlsEngine::derivatives(std::span<const double> values) const {
  if (values.size() != points_.size()) throw InvalidArgument("one value per point required");
  ScalarDerivatives d;
  d.gradient.resize(points_.size());
  d.laplacian.resize(points_.size());
  for (std::size_t i = 0; i < fits_.size(); ++i) {
    const DerivativeJet j = fits_[i].jet(values);
    d.gradient[i] = j.gradient;
    d.laplacian[i] = j.laplacian;
  }
  return d;
}

ScalarDerivatives StencilEngine::derivatives(std::span<const double> values) const {
  if (values.size() != grid_.size()) throw InvalidArgument("one value per grid point required");
  ScalarDerivatives d;
  d.gradient.assign(values.size(), Coord{});
  d.laplacian.resize(values.size());
  for (int a = 0; a < grid_.dim(); ++a) {
    const auto da = partial_derivative(values, grid_, a);
    for (std::size_t k = 0; k < values.size(); ++k) d.gradient[k][a] = da[k];
  }
  apply_laplacian(values, d.laplacian, grid_);
  return d;
}

EulerianFields eulerian_from_exact(const ExactField& field, const UniformGrid& grid) {
  if (grid.dim() != field.dim()) throw InvalidArgument("grid dimension does not match the field");
  std::vector<Coord> pts(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) pts[k] = grid.point(k);
  FluidEnsemble e = init_from_exact(field, pts);
  return EulerianFields{grid, 0.0, std::move(e.velocities), std::move(e.log_amplitude)};
}

namespace {

struct Tendency {
  std::vector<Coord> dv;
  std::vector<double> dg;
  std::vector<double> q;
};

Tendency eulerian_tendency(const UniformGrid& grid, const std::vector<Coord>& velocities,
                           const std::vector<double>& g, const DerivativeEngine& engine,
                           const ScalarPotential& potential) {
  const int dim = grid.dim();
  const std::size_t n = g.size();
  const ScalarDerivatives dg = engine.derivatives(g);
  Tendency t;
  t.q.resize(n);
  std::vector<double> total(n);
  for (std::size_t k = 0; k < n; ++k) {
    double grad_sq = 0.0;
    for (int a = 0; a < dim; ++a) grad_sq += dg.gradient[k][a] * dg.gradient[k][a];
    t.q[k] = -0.5 * (grad_sq + dg.laplacian[k]);
    total[k] = t.q[k] + potential_at(potential, grid.point(k));
  }
  const ScalarDerivatives du = engine.derivatives(total);
  std::vector<ScalarDerivatives> dv;
  for (int a = 0; a < dim; ++a) dv.push_back(engine.derivatives(component(velocities, a)));

  t.dv.assign(n, Coord{});
  t.dg.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double div = 0.0;
    double advect_g = 0.0;
    for (int a = 0; a < dim; ++a) {
      div += dv[a].gradient[k][a];
      advect_g += velocities[k][a] * dg.gradient[k][a];
      double advect_v = 0.0;
      for (int b = 0; b < dim; ++b) advect_v += velocities[k][b] * dv[a].gradient[k][b];
      t.dv[k][a] = -du.gradient[k][a] - advect_v;
    }
    t.dg[k] = -0.5 * div - advect_g;
  }
  return t;
}

void check_state(EulerianStep& step) {
  if (!all_finite(step.fields.velocities, step.fields.grid.dim()) ||
      !all_finite(step.fields.log_amplitude)) {
    step.status = RunStatus::degraded;
    step.reason = "non-finite hydrodynamic state at t = " + std::to_string(step.fields.t);
  }
}

EulerianFields axpy(const EulerianFields& base, double h, const Tendency& t) {
  EulerianFields out = base;
  const int dim = base.grid.dim();
  for (std::size_t k = 0; k < out.log_amplitude.size(); ++k) {
    for (int a = 0; a < dim; ++a) out.velocities[k][a] += h * t.dv[k][a];
    out.log_amplitude[k] += h * t.dg[k];
  }
  out.t = base.t + h;
  return out;
}

}  // namespace

EulerianStep eulerian_step(const EulerianFields& fields, double dt, const DerivativeEngine& engine,
                           const ScalarPotential& potential) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  Tendency t = eulerian_tendency(fields.grid, fields.velocities, fields.log_amplitude, engine,
                                 potential);
  EulerianStep out{axpy(fields, dt, t), std::move(t.q), RunStatus::valid, {}};
  check_state(out);
  return out;
}

EulerianStep eulerian_rk4_step(const EulerianFields& fields, double dt,
                               const DerivativeEngine& engine, const ScalarPotential& potential) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  auto eval = [&](const EulerianFields& f) {
    return eulerian_tendency(f.grid, f.velocities, f.log_amplitude, engine, potential);
  };
  Tendency k1 = eval(fields);
  const Tendency k2 = eval(axpy(fields, 0.5 * dt, k1));
  const Tendency k3 = eval(axpy(fields, 0.5 * dt, k2));
  const Tendency k4 = eval(axpy(fields, dt, k3));
  Tendency sum = k1;
  const int dim = fields.grid.dim();
  for (std::size_t k = 0; k < sum.dg.size(); ++k) {
    for (int a = 0; a < dim; ++a) {
      sum.dv[k][a] = (k1.dv[k][a] + 2.0 * k2.dv[k][a] + 2.0 * k3.dv[k][a] + k4.dv[k][a]) / 6.0;
    }
    sum.dg[k] = (k1.dg[k] + 2.0 * k2.dg[k] + 2.0 * k3.dg[k] + k4.dg[k]) / 6.0;
  }
  EulerianStep out{axpy(fields, dt, sum), std::move(k1.q), RunStatus::valid, {}};
  check_state(out);
  return out;
}

namespace {

double max_abs_diff(const HydroDiagnostics& d, double half_width, bool within) {
  double worst = 0.0;
  for (std::size_t k = 0; k < d.position.size(); ++k) {
    if ((std::abs(d.position[k]) <= half_width) != within) continue;
    const double e = std::abs(d.v_num[k] - d.v_exact[k]);
    if (std::isnan(e)) continue;
    worst = std::max(worst, e);
  }
  return worst;
}

}  // namespace

double HydroDiagnostics::max_velocity_error_within(double half_width) const {
  return max_abs_diff(*this, half_width, true);
}

double HydroDiagnostics::max_velocity_error_outside(double half_width) const {
  return max_abs_diff(*this, half_width, false);
}

HydroDiagnostics diagnose(const ExactField& exact, double t, std::span<const Coord> positions,
                          std::span<const Coord> velocities, std::span<const double> q,
                          RunStatus status) {
  HydroDiagnostics d;
  d.t = t;
  d.status = status;
  const std::size_t n = positions.size();
  d.position.resize(n);
  d.v_num.resize(n);
  d.v_exact.resize(n);
  d.q_num.resize(n);
  d.q_exact.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    d.position[k] = positions[k][0];
    d.v_num[k] = velocities[k][0];
    d.q_num[k] = k < q.size() ? q[k] : kNaN;
    try {
      d.v_exact[k] = exact_velocity(exact, positions[k], t, 0.0)[0];
      d.q_exact[k] = exact_quantum_potential(exact, positions[k], t, 0.0);
    } catch (const NodeError&) {
      d.v_exact[k] = kNaN;
      d.q_exact[k] = kNaN;
    }
    const double ev = std::abs(d.v_num[k] - d.v_exact[k]);
    const double eq = std::abs(d.q_num[k] - d.q_exact[k]);
    if (std::isfinite(ev)) d.max_velocity_error = std::max(d.max_velocity_error, ev);
    if (std::isfinite(eq)) d.max_q_error = std::max(d.max_q_error, eq);
  }
  return d;
}

std::vector<Coord> initial_points(const ScenarioConfig& config) {
  const UniformGrid& g = config.grid;
  std::vector<Coord> all = uniform_points(g.lo(), g.hi(), g.points_per_axis());
  if (config.layout == HydroLayout::uniform) return all;
  const double y = config.packet.slit_offset;
  const double hw = config.slit_halfwidth;
  std::vector<Coord> kept;
  for (const Coord& p : all) {
    if (std::abs(p[0] - y) <= hw || std::abs(p[0] + y) <= hw) kept.push_back(p);
  }
  return kept;
}

namespace {

void mark_degraded(HydroRun& run, double t, std::string reason) {
  if (run.status == RunStatus::degraded) return;
  run.status = RunStatus::degraded;
  run.reason = std::move(reason);
  run.degraded_at = t;
}

// Index of the point nearest to each trajectory start.
std::vector<std::size_t> tracked_points(const std::vector<Coord>& points,
                                        const std::vector<Coord>& starts) {
  std::vector<std::size_t> out;
  for (const Coord& s : starts) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < points.size(); ++k) {
      if (std::abs(points[k][0] - s[0]) < std::abs(points[best][0] - s[0])) best = k;
    }
    out.push_back(best);
  }
  return out;
}

void record_tracks(HydroRun& run, const std::vector<std::size_t>& tracked, double t,
                   const std::vector<Coord>& positions) {
  for (std::size_t k = 0; k < tracked.size(); ++k) {
    run.trajectories[k].times.push_back(t);
    run.trajectories[k].positions.push_back(positions[tracked[k]]);
  }
}

HydroRun run_lagrange(const ScenarioConfig& config) {
  const ExactField exact = config.exact_field();
  const double dt = config.dt();
  const auto wanted = snapshot_steps(config.snapshot_times, dt, config.n_steps);
  HydroRun run;

  FluidEnsemble ens = init_from_exact(exact, initial_points(config));
  const auto tracked = tracked_points(ens.positions, config.trajectory_starts);
  run.trajectories.assign(tracked.size(), Trajectory{1, Provenance::hydro, {}, {}});
  record_tracks(run, tracked, 0.0, ens.positions);

  auto snapshot = [&](const FluidEnsemble& e) {
    std::vector<double> q;
    try {
      q = quantum_potential(e, config.mwls);
    } catch (const Error&) {
      q.assign(e.size(), kNaN);
    }
    run.snapshots.push_back(e);
    run.diagnostics.push_back(diagnose(exact, e.t, e.positions, e.velocities, q, run.status));
  };
  if (!wanted.empty() && wanted.front() == 0) snapshot(ens);

  for (std::size_t step = 1; step <= config.n_steps; ++step) {
    HydroStep next;
    try {
      next = lagrangian_step(ens, dt, config.mwls);
    } catch (const IllConditioned& e) {
      mark_degraded(run, ens.t, e.what());
      snapshot(ens);
      return run;
    } catch (const TooFewPoints& e) {
      mark_degraded(run, ens.t, e.what());
      snapshot(ens);
      return run;
    }
    const bool finite = all_finite(next.ensemble.positions, 1) &&
                        all_finite(next.ensemble.velocities, 1) &&
                        all_finite(next.ensemble.log_amplitude);
    if (!finite) {
      mark_degraded(run, ens.t, next.reason);
      snapshot(ens);
      return run;
    }
    ens = std::move(next.ensemble);
    ens.t = static_cast<double>(step) * dt;
    if (next.status == RunStatus::degraded) mark_degraded(run, ens.t, next.reason);
    record_tracks(run, tracked, ens.t, ens.positions);
    if (std::binary_search(wanted.begin(), wanted.end(), step)) snapshot(ens);
  }
  return run;
}

HydroRun run_euler(const ScenarioConfig& config) {
  const ExactField exact = config.exact_field();
  const double dt = config.dt();
  const auto wanted = snapshot_steps(config.snapshot_times, dt, config.n_steps);
  HydroRun run;

  EulerianFields fields = eulerian_from_exact(exact, config.grid);
  std::vector<Coord> points(config.grid.size());
  for (std::size_t k = 0; k < points.size(); ++k) points[k] = config.grid.point(k);

  std::unique_ptr<DerivativeEngine> engine;
  if (config.euler_engine == EulerEngine::stencil) {
    engine = std::make_unique<StencilEngine>(config.grid);
  } else {
    try {
      engine = std::make_unique<MwlsEngine>(points, config.dim(), config.mwls);
    } catch (const IllConditioned& e) {
      mark_degraded(run, 0.0, e.what());
      return run;
    }
  }

  auto snapshot = [&](const EulerianFields& f, const std::vector<double>& q) {
    run.snapshots.push_back(FluidEnsemble{config.dim(), f.t, points, f.velocities,
                                          f.log_amplitude});
    run.diagnostics.push_back(diagnose(exact, f.t, points, f.velocities, q, run.status));
  };
  auto current_q = [&](const EulerianFields& f) {
    const ScalarDerivatives d = engine->derivatives(f.log_amplitude);
    std::vector<double> q(f.log_amplitude.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
      double grad_sq = 0.0;
      for (int a = 0; a < config.dim(); ++a) grad_sq += d.gradient[k][a] * d.gradient[k][a];
      q[k] = -0.5 * (grad_sq + d.laplacian[k]);
    }
    return q;
  };
  if (!wanted.empty() && wanted.front() == 0) snapshot(fields, current_q(fields));

  for (std::size_t step = 1; step <= config.n_steps; ++step) {
    EulerianStep next = config.euler_integrator == TimeIntegrator::rk4
                            ? eulerian_rk4_step(fields, dt, *engine)
                            : eulerian_step(fields, dt, *engine);
    if (next.status == RunStatus::degraded) {
      mark_degraded(run, fields.t, next.reason);
      snapshot(fields, current_q(fields));
      return run;
    }
    fields = std::move(next.fields);
    fields.t = static_cast<double>(step) * dt;
    if (std::binary_search(wanted.begin(), wanted.end(), step)) {
      snapshot(fields, current_q(fields));
    }
  }
  return run;
}

}  // namespace

HydroRun propagate_hydro(const ScenarioConfig& config) {
  config.validate();
  switch (config.solver) {
    case SolverKind::hydro_lagrange:
      return run_lagrange(config);
    case SolverKind::hydro_euler:
      return run_euler(config);
    case SolverKind::schrodinger_fd:
      break;
  }
  throw InvalidArgument("propagate_hydro needs a hydrodynamic solver");
}

}  // namespace slitflow
