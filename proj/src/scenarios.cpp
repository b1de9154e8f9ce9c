#include "slitflow/scenarios.hpp"

#include <array>
#include <string>

#include "slitflow/error.hpp"

namespace slitflow {

namespace {

constexpr std::string_view kFig2 = R"(# Initial quantum potential from MWLS fits, polynomial order 2 to 5.
scenario = fig2_quantum_potential
particles = 1
grid.lo = -4
grid.hi = 4
grid.n = 401
solver = hydro_lagrange
mwls.neighbors = 12
mwls.order = 5
t_final = 0.01
n_steps = 1000
study = initial_q
study.orders = 2, 3, 4, 5
)";

constexpr std::string_view kFig3 = R"(# Lagrangian hydrodynamics of the two-packet state; velocity near the
# quasinode at y = 0 against the exact value and a grid solver baseline.
scenario = fig3_velocity
particles = 1
grid.lo = -4
grid.hi = 4
grid.n = 801
solver = hydro_lagrange
mwls.neighbors = 12
mwls.order = 5
t_final = 0.01
n_steps = 1000
snapshots = 0, 0.005, 0.01
trajectory.starts = (0.1); (0.5); (1); (-0.1); (-0.5); (-1)
baseline = schrodinger_fd
)";

constexpr std::string_view kFig3Control = R"(# Single Gaussian packet, no node: the Lagrangian scheme should follow the
# closed-form similarity flow.
scenario = fig3_single_packet_control
particles = 1
initial = single_slit
grid.lo = 0
grid.hi = 2
grid.n = 201
solver = hydro_lagrange
mwls.neighbors = 12
mwls.order = 5
t_final = 0.01
n_steps = 1000
snapshots = 0.01
trajectory.starts = (0.8); (1.2)
)";

constexpr std::string_view kFig3Euler = R"(# Same setup as fig3_velocity on a fixed grid.
scenario = fig3_euler
particles = 1
grid.lo = -4
grid.hi = 4
grid.n = 801
solver = hydro_euler
euler.engine = mwls
euler.integrator = euler
mwls.neighbors = 12
mwls.order = 5
t_final = 0.01
n_steps = 1000
snapshots = 0.005, 0.01
baseline = schrodinger_fd
)";

constexpr std::string_view kSlits = R"(# Points only near the two slits: each group evolves like an isolated
# packet and no interference forms.
scenario = slit_neighborhood_demo
particles = 1
grid.lo = -4
grid.hi = 4
grid.n = 801
solver = hydro_lagrange
hydro.layout = slits
hydro.slit_halfwidth = 0.5
mwls.neighbors = 12
mwls.order = 5
t_final = 0.01
n_steps = 1000
snapshots = 0.01
trajectory.starts = (0.8); (1.2); (-0.8); (-1.2)
)";

constexpr std::string_view kFig6 = R"(# One-particle interference on the grid solver; trajectories from the
# propagated field against those of the exact field.
scenario = fig6_one_particle
particles = 1
grid.lo = -13
grid.hi = 13
grid.n = 261
solver = schrodinger_fd
t_final = 1
n_steps = 5000
snapshots = 0.25, 0.5, 0.75, 1
trajectory.starts = (0.72); (0.8); (0.88); (0.96); (1.04); (1.12); (1.2); (1.28); (-0.72); (-0.8); (-0.88); (-0.96); (-1.04); (-1.12); (-1.2); (-1.28)
)";

constexpr std::string_view kFig7a = R"(# Two bosons in configuration space (y1, y2).
scenario = fig7a_two_particle_boson
particles = 2
exchange_sign = 1
grid.lo = -13
grid.hi = 13
grid.n = 261
solver = schrodinger_fd
t_final = 1
n_steps = 15000
snapshots = 1
trajectory.starts = (1, -0.6)
)";

constexpr std::string_view kFig7b = R"(# Two bosons in configuration space (y1, y2).
scenario = fig7b_two_particle_boson
particles = 2
exchange_sign = 1
grid.lo = -13
grid.hi = 13
grid.n = 261
solver = schrodinger_fd
t_final = 1
n_steps = 15000
snapshots = 1
trajectory.starts = (1, -1.4)
)";

constexpr std::string_view kFig7Reduced = R"(# Coarse two-boson run for quick checks of exchange symmetry.
scenario = fig7_ci_reduced
particles = 2
exchange_sign = 1
grid.lo = -13
grid.hi = 13
grid.n = 131
solver = schrodinger_fd
t_final = 1
n_steps = 4000
snapshots = 0.5, 1
trajectory.starts = (1, -0.6); (1, -1.4); (-0.6, 1); (-1.4, 1)
)";

constexpr std::array<BundledScenario, 9> kScenarios{{
    {"fig2_quantum_potential", "initial quantum potential error against polynomial order", kFig2},
    {"fig3_velocity", "Lagrangian velocity near the quasinode, with grid-solver baseline", kFig3},
    {"fig3_single_packet_control", "Lagrangian run of a lone packet (no node)", kFig3Control},
    {"fig3_euler", "fixed-grid hydrodynamics of the two-packet state", kFig3Euler},
    {"slit_neighborhood_demo", "Lagrangian points restricted to the slit neighbourhoods", kSlits},
    {"fig6_one_particle", "one-particle grid solver with 16 trajectories", kFig6},
    {"fig7a_two_particle_boson", "two bosons, trajectory from (1, -0.6)", kFig7a},
    {"fig7b_two_particle_boson", "two bosons, trajectory from (1, -1.4)", kFig7b},
    {"fig7_ci_reduced", "two bosons on a 131 x 131 grid, 4000 steps", kFig7Reduced},
}};

}  // namespace

std::span<const BundledScenario> bundled_scenarios() { return kScenarios; }

const BundledScenario* find_scenario(std::string_view name) {
  for (const auto& s : kScenarios) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ScenarioConfig scenario_config(std::string_view name) {
  const BundledScenario* s = find_scenario(name);
  if (s == nullptr) throw InvalidArgument("unknown scenario '" + std::string(name) + "'");
  return parse_config_text(s->text);
}

}  // namespace slitflow
