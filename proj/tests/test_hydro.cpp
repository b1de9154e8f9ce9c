#include <doctest.h>

#include <cmath>
#include <vector>

#include "slitflow/analytic.hpp"
#include "slitflow/config.hpp"
#include "slitflow/error.hpp"
#include "slitflow/hydro.hpp"
#include "slitflow/scenarios.hpp"

using namespace slitflow;

namespace {

MwlsConfig quintic() {
  MwlsConfig c;
  c.order = 5;
  c.neighbors = 12;
  return c;
}

FluidEnsemble flat_ensemble(std::size_t n, double velocity) {
  FluidEnsemble e;
  e.positions = uniform_points(-1.0, 1.0, n);
  e.velocities.assign(n, Coord{velocity, 0.0});
  e.log_amplitude.assign(n, -0.3);
  return e;
}

}  // namespace

TEST_CASE("initial hydrodynamic state from the exact packet") {
  const WavePacketParams p;
  const ExactField ex(p, FieldKind::one_particle);
  const auto pts = uniform_points(-4.0, 4.0, 401);
  CHECK(pts[200][0] == doctest::Approx(0.0));
  CHECK(pts[1][0] - pts[0][0] == doctest::Approx(0.02));
  const FluidEnsemble e = init_from_exact(ex, pts);
  for (const auto& v : e.velocities) CHECK(v[0] == 0.0);
  // At the slit centre g = ln N + ln psi_A(Y); psi_B is e^-25 smaller there.
  const double g_at_y = e.log_amplitude[250];
  CHECK(pts[250][0] == doctest::Approx(1.0));
  CHECK(g_at_y == doctest::Approx(std::log(normalization_one(p)) + std::log(1.412342522905532)).epsilon(1e-9));
  CHECK_THROWS_AS(uniform_points(1.0, 0.0, 5), InvalidArgument);
}

TEST_CASE("quantum potential of the initial packet") {
  const WavePacketParams p;
  const ExactField ex(p, FieldKind::one_particle);
  const FluidEnsemble e = init_from_exact(ex, uniform_points(-4.0, 4.0, 401));
  const auto q = quantum_potential(e, quintic());
  // Q = -(1/2)[(g')^2 + g''] with g = -(y - Y)^2 / (4 sigma0^2) near the slit:
  // (g')^2 vanishes at Y and g'' = -1 / (2 sigma0^2) = -12.5.
  CHECK(q[250] == doctest::Approx(6.25).epsilon(1e-6));
  CHECK(q[250] == doctest::Approx(exact_quantum_potential(ex, {1.0, 0.0}, 0.0)).epsilon(1e-6));

  const auto flat = quantum_potential(flat_ensemble(41, 0.0), quintic());
  for (double v : flat) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("uniform flow without forces translates rigidly") {
  const FluidEnsemble e = flat_ensemble(41, 0.7);
  const HydroStep s = lagrangian_step(e, 0.01, quintic());
  CHECK(s.status == RunStatus::valid);
  for (std::size_t k = 0; k < e.size(); ++k) {
    CHECK(s.ensemble.positions[k][0] == doctest::Approx(e.positions[k][0] + 0.007));
    CHECK(s.ensemble.velocities[k][0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(s.ensemble.log_amplitude[k] == doctest::Approx(-0.3).epsilon(1e-12));
  }
  CHECK(s.ensemble.t == doctest::Approx(0.01));
  CHECK_THROWS_AS(lagrangian_step(e, 0.0, quintic()), InvalidArgument);
}

TEST_CASE("oscillator ground state is stationary") {
  // g = -omega y^2 / 2 gives Q = omega/2 - omega^2 y^2 / 2, which the
  // potential omega^2 y^2 / 2 cancels exactly: no force, no flow.
  const double omega = 2.0;
  FluidEnsemble e;
  e.positions = uniform_points(-2.0, 2.0, 81);
  e.velocities.assign(e.size(), Coord{});
  for (const auto& r : e.positions) e.log_amplitude.push_back(-0.5 * omega * r[0] * r[0]);
  const ScalarPotential v = [&](const Coord& r) { return 0.5 * omega * omega * r[0] * r[0]; };
  FluidEnsemble cur = e;
  for (int k = 0; k < 20; ++k) {
    const HydroStep s = lagrangian_step(cur, 1e-3, quintic(), v);
    CHECK(s.status == RunStatus::valid);
    cur = s.ensemble;
  }
  for (std::size_t k = 0; k < e.size(); ++k) {
    CHECK(std::abs(cur.velocities[k][0]) < 1e-9);
    CHECK(cur.positions[k][0] == doctest::Approx(e.positions[k][0]).epsilon(1e-12));
    CHECK(cur.log_amplitude[k] == doctest::Approx(e.log_amplitude[k]).epsilon(1e-12));
  }
  // Without the potential the packet spreads: points move outwards.
  const HydroStep free = lagrangian_step(lagrangian_step(e, 1e-3, quintic()).ensemble, 1e-3, quintic());
  CHECK(free.ensemble.positions[80][0] > 2.0);
  CHECK(free.ensemble.positions[0][0] < -2.0);
}

TEST_CASE("crossing points degrade a step") {
  FluidEnsemble e = flat_ensemble(41, 0.0);
  for (std::size_t k = 0; k < e.size(); ++k) e.velocities[k][0] = (k % 2 == 0) ? 10.0 : -10.0;
  const HydroStep s = lagrangian_step(e, 0.01, quintic());
  CHECK(s.status == RunStatus::degraded);
  CHECK(s.reason.find("crossed") != std::string::npos);
  CHECK(to_string(RunStatus::degraded) == "Degraded");
  CHECK(to_string(RunStatus::valid) == "Valid");
}

TEST_CASE("single packet control follows the exact flow") {
  const ScenarioConfig cfg = scenario_config("fig3_single_packet_control");
  const HydroRun run = propagate_hydro(cfg);
  CHECK(run.status == RunStatus::valid);
  const ExactField ex = cfg.exact_field();
  REQUIRE(run.trajectories.size() == 2);
  for (const Trajectory& t : run.trajectories) {
    const Trajectory ref = exact_trajectory(ex, t.positions.front(), t.times);
    double worst = 0.0;
    for (std::size_t k = 0; k < t.positions.size(); ++k) {
      worst = std::max(worst, std::abs(t.positions[k][0] - ref.positions[k][0]));
    }
    CHECK(worst < 1e-4);
  }
  REQUIRE(!run.diagnostics.empty());
  CHECK(run.diagnostics.back().max_velocity_error < 1e-3);
}

TEST_CASE("fixed-grid equations") {
  const UniformGrid g(1, -1.0, 1.0, 41);
  const StencilEngine engine(g);
  EulerianFields rest{g, 0.0, std::vector<Coord>(g.size(), Coord{}), std::vector<double>(g.size(), 0.2)};
  const EulerianStep still = eulerian_step(rest, 0.01, engine);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(std::abs(still.fields.velocities[k][0]) < 1e-12);
    CHECK(still.fields.log_amplitude[k] == doctest::Approx(0.2));
  }

  // v = y with flat g: (v . grad) v = y, div v = 1.
  EulerianFields ramp = rest;
  for (std::size_t k = 0; k < g.size(); ++k) ramp.velocities[k][0] = g.coordinate(k);
  const double dt = 0.01;
  for (const DerivativeEngine* eng : std::initializer_list<const DerivativeEngine*>{&engine}) {
    const EulerianStep s = eulerian_step(ramp, dt, *eng);
    CHECK(s.status == RunStatus::valid);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double y = g.coordinate(k);
      CHECK(s.fields.velocities[k][0] == doctest::Approx(y - dt * y).epsilon(1e-10));
      CHECK(s.fields.log_amplitude[k] == doctest::Approx(0.2 - 0.5 * dt).epsilon(1e-10));
    }
  }
  std::vector<Coord> pts(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) pts[k] = g.point(k);
  const MwlsEngine mwls(pts, 1, quintic());
  const EulerianStep m = eulerian_step(ramp, dt, mwls);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double y = g.coordinate(k);
    CHECK(m.fields.velocities[k][0] == doctest::Approx(y - dt * y).epsilon(1e-9));
  }
}

TEST_CASE("fixed-grid RK4 against the exact packet") {
  const WavePacketParams p;
  const ExactField ex(p, FieldKind::one_particle);
  const UniformGrid g(1, -4.0, 4.0, 801);
  const StencilEngine engine(g);
  EulerianFields f = eulerian_from_exact(ex, g);
  for (int k = 0; k < 10; ++k) f = eulerian_rk4_step(f, 1e-4, engine).fields;
  CHECK(f.t == doctest::Approx(1e-3));
  // Away from the node the flow is smooth and the grid derivatives are good.
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double y = g.coordinate(k);
    if (std::abs(y) < 0.5 || std::abs(y) > 1.5) continue;
    worst = std::max(worst, std::abs(f.velocities[k][0] - exact_velocity(ex, {y, 0.0}, 1e-3)[0]));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("slit neighbourhood layout") {
  ScenarioConfig cfg = scenario_config("slit_neighborhood_demo");
  const auto pts = initial_points(cfg);
  REQUIRE(!pts.empty());
  for (const auto& r : pts) CHECK(std::abs(std::abs(r[0]) - 1.0) <= 0.5 + 1e-12);
  cfg.layout = HydroLayout::uniform;
  CHECK(initial_points(cfg).size() == cfg.grid.points_per_axis());
}

TEST_CASE("diagnostics split the error by region") {
  const WavePacketParams p;
  const ExactField ex(p, FieldKind::one_particle);
  const auto pts = uniform_points(-2.0, 2.0, 5);
  std::vector<Coord> vel(5, Coord{});
  std::vector<double> q(5, 0.0);
  const HydroDiagnostics d = diagnose(ex, 0.0, pts, vel, q, RunStatus::valid);
  CHECK(d.position.size() == 5);
  CHECK(d.max_velocity_error == doctest::Approx(0.0));
  CHECK(std::isnan(d.v_exact[2]) == false);
  CHECK(d.max_velocity_error_within(0.5) == doctest::Approx(0.0));
  CHECK(d.max_velocity_error_outside(0.5) == doctest::Approx(0.0));
}
