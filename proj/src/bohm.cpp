#include "slitflow/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "slitflow/error.hpp"
#include "slitflow/stencil.hpp"

namespace slitflow {

VelocityField velocity_field(const ComplexField& field) {
  const UniformGrid& grid = field.grid;
  const std::size_t n = grid.size();
  VelocityField vf{grid, std::vector<Coord>(n, Coord{}), std::vector<std::uint8_t>(n, 0)};

  double peak = 0.0;
  for (std::size_t k = 0; k < n; ++k) peak = std::max(peak, probability_density(field, k));
  const double threshold = kNodeEpsilon * peak;

  for (int a = 0; a < grid.dim(); ++a) {
    const auto d_re = partial_derivative(field.re, grid, a);
    const auto d_im = partial_derivative(field.im, grid, a);
    for (std::size_t k = 0; k < n; ++k) {
      const double rho = probability_density(field, k);
      if (!(rho >= threshold) || rho == 0.0) {
        vf.masked[k] = 1;
        vf.velocity[k][a] = 0.0;
        continue;
      }
      vf.velocity[k][a] = (field.re[k] * d_im[k] - field.im[k] * d_re[k]) / rho;
    }
  }
  return vf;
}

namespace {

struct AxisStencil {
  std::size_t base;  // first of the four grid lines
  double s;          // position in units of the spacing, relative to base
};

AxisStencil axis_stencil(const UniformGrid& grid, double x) {
  const std::size_t n = grid.points_per_axis();
  double s = (x - grid.lo()) / grid.spacing();
  const double nearest = std::round(s);
  if (std::abs(s - nearest) < 1e-9) s = nearest;
  const auto cell = static_cast<std::ptrdiff_t>(std::floor(s));
  const std::ptrdiff_t base =
      std::clamp<std::ptrdiff_t>(cell - 1, 0, static_cast<std::ptrdiff_t>(n) - 4);
  return {static_cast<std::size_t>(base), s - static_cast<double>(base)};
}

// Lagrange interpolation at s through the nodes 0..3 flagged in `use`.
// Returns false when fewer than two nodes are available.
bool lagrange(const double (&values)[4], const bool (&use)[4], double s, double& out) {
  int count = 0;
  for (bool u : use) count += u ? 1 : 0;
  if (count < 2) return false;
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (!use[i]) continue;
    double w = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j == i || !use[j]) continue;
      w *= (s - j) / static_cast<double>(i - j);
    }
    sum += w * values[i];
  }
  out = sum;
  return true;
}

std::string where(const Coord& r, int dim) {
  std::string s = "(" + std::to_string(r[0]);
  if (dim == 2) s += ", " + std::to_string(r[1]);
  return s + ")";
}

}  // namespace

Coord interpolate_velocity(const VelocityField& vf, const Coord& r) {
  const UniformGrid& grid = vf.grid;
  const int dim = grid.dim();
  for (int a = 0; a < dim; ++a) {
    if (!(r[a] >= grid.lo() && r[a] <= grid.hi())) {
      throw InvalidArgument("point " + where(r, dim) + " lies outside the grid");
    }
  }
  const AxisStencil s0 = axis_stencil(grid, r[0]);
  Coord out{};
  if (dim == 1) {
    bool use[4];
    int masked = 0;
    for (int i = 0; i < 4; ++i) {
      use[i] = vf.masked[s0.base + i] == 0;
      masked += use[i] ? 0 : 1;
    }
    if (masked > 2) throw MaskedRegion("velocity stencil masked at " + where(r, dim), 0.0);
    double values[4];
    for (int i = 0; i < 4; ++i) values[i] = vf.velocity[s0.base + i][0];
    lagrange(values, use, s0.s, out[0]);
    return out;
  }

  const AxisStencil s1 = axis_stencil(grid, r[1]);
  int masked = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) masked += vf.masked[grid.flat_index(s0.base + i, s1.base + j)];
  }
  if (masked > 8) throw MaskedRegion("velocity stencil masked at " + where(r, dim), 0.0);

  for (int a = 0; a < 2; ++a) {
    double rows[4];
    bool row_ok[4];
    for (int i = 0; i < 4; ++i) {
      double values[4];
      bool use[4];
      for (int j = 0; j < 4; ++j) {
        const std::size_t k = grid.flat_index(s0.base + i, s1.base + j);
        values[j] = vf.velocity[k][a];
        use[j] = vf.masked[k] == 0;
      }
      row_ok[i] = lagrange(values, use, s1.s, rows[i]);
    }
    if (!lagrange(rows, row_ok, s0.s, out[a])) {
      throw MaskedRegion("velocity stencil masked at " + where(r, dim), 0.0);
    }
  }
  return out;
}

ExactFieldSource::ExactFieldSource(ExactField field, UniformGrid grid, double dt)
    : field_(std::move(field)),
      grid_(grid),
      dt_(dt),
      current_(sample_field(field_, grid_, 0.0)) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
}

void ExactFieldSource::advance() {
  ++steps_;
  current_ = sample_field(field_, grid_, time());
}

TrajectoryIntegrator::TrajectoryIntegrator(std::vector<Coord> starts, const ComplexField& field,
                                           double t, Provenance provenance)
    : dim_(field.grid.dim()), t_(t), current_(velocity_field(field)) {
  trajectories_.resize(starts.size());
  failures_.resize(starts.size());
  for (std::size_t k = 0; k < starts.size(); ++k) {
    Trajectory& tr = trajectories_[k];
    tr.dim = dim_;
    tr.provenance = provenance;
    tr.times.push_back(t);
    tr.positions.push_back(starts[k]);
    try {
      interpolate_velocity(current_, starts[k]);
    } catch (const Error& e) {
      failures_[k] = TrajectoryFailure{t, e.what()};
    }
  }
}

void TrajectoryIntegrator::advance(const ComplexField& next, double t_next) {
  const double h = t_next - t_;
  if (!(h > 0.0)) throw InvalidArgument("trajectory time lattice must be strictly increasing");
  VelocityField upcoming = velocity_field(next);

  for (std::size_t k = 0; k < trajectories_.size(); ++k) {
    if (failures_[k]) continue;
    Trajectory& tr = trajectories_[k];
    const Coord r = tr.positions.back();
    double stage_time = t_;
    try {
      auto velocity = [&](const Coord& p, double theta) {
        stage_time = t_ + theta * h;
        if (theta == 0.0) return interpolate_velocity(current_, p);
        if (theta == 1.0) return interpolate_velocity(upcoming, p);
        const Coord v0 = interpolate_velocity(current_, p);
        const Coord v1 = interpolate_velocity(upcoming, p);
        Coord v{};
        for (int a = 0; a < dim_; ++a) v[a] = (1.0 - theta) * v0[a] + theta * v1[a];
        return v;
      };
      auto shifted = [&](double scale, const Coord& v) {
        Coord p = r;
        for (int a = 0; a < dim_; ++a) p[a] += scale * v[a];
        return p;
      };
      const Coord k1 = velocity(r, 0.0);
      const Coord k2 = velocity(shifted(0.5 * h, k1), 0.5);
      const Coord k3 = velocity(shifted(0.5 * h, k2), 0.5);
      const Coord k4 = velocity(shifted(h, k3), 1.0);
      Coord end = r;
      for (int a = 0; a < dim_; ++a) {
        end[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
      }
      for (int a = 0; a < dim_; ++a) {
        if (!(end[a] >= current_.grid.lo() && end[a] <= current_.grid.hi())) {
          stage_time = t_next;
          throw InvalidArgument("trajectory left the grid");
        }
      }
      tr.times.push_back(t_next);
      tr.positions.push_back(end);
    } catch (const Error& e) {
      failures_[k] = TrajectoryFailure{stage_time, e.what()};
    }
  }
  current_ = std::move(upcoming);
  t_ = t_next;
}

Trajectory integrate_trajectory(FieldSource& source, const Coord& start, double t0, double t1,
                                double dt, Provenance provenance) {
  if (!(dt > 0.0) || !(t1 >= t0)) throw InvalidArgument("need dt > 0 and t1 >= t0");
  if (std::abs(source.step_size() - dt) > 1e-12 * dt) {
    throw InvalidArgument("field source step does not match the trajectory step");
  }
  if (std::abs(source.time() - t0) > 1e-9 * std::max(1.0, std::abs(t0))) {
    throw InvalidArgument("field source is not at the start time");
  }
  const auto steps = static_cast<std::size_t>(std::llround((t1 - t0) / dt));
  TrajectoryIntegrator integrator({start}, source.current(), t0, provenance);
  auto check = [&] {
    if (const auto& f = integrator.failures().front()) {
      throw MaskedRegion("trajectory from " + where(start, source.current().grid.dim()) +
                             " stopped at t = " + std::to_string(f->time) + ": " + f->reason,
                         f->time);
    }
  };
  check();
  for (std::size_t k = 1; k <= steps; ++k) {
    source.advance();
    integrator.advance(source.current(), t0 + static_cast<double>(k) * dt);
    check();
  }
  return integrator.trajectories().front();
}

CrossingReport crossing_report(std::span<const Trajectory> trajectories,
                               double coincidence_radius) {
  CrossingReport report;
  const std::size_t m = trajectories.size();
  if (m < 2) return report;
  auto common = [&](std::size_t a, std::size_t b) {
    return std::min(trajectories[a].positions.size(), trajectories[b].positions.size());
  };

  if (trajectories.front().dim == 1) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return trajectories[a].positions.front()[0] < trajectories[b].positions.front()[0];
    });
    for (std::size_t p = 1; p < m; ++p) {
      const std::size_t a = order[p - 1];
      const std::size_t b = order[p];
      const std::size_t len = common(a, b);
      for (std::size_t k = 0; k < len; ++k) {
        if (!(trajectories[a].positions[k][0] < trajectories[b].positions[k][0])) {
          report.violations.push_back({a, b, trajectories[a].times[k]});
          break;
        }
      }
    }
    return report;
  }

  const double r2 = coincidence_radius * coincidence_radius;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const std::size_t len = common(a, b);
      for (std::size_t k = 0; k < len; ++k) {
        const Coord& p = trajectories[a].positions[k];
        const Coord& q = trajectories[b].positions[k];
        const double d2 = (p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]);
        if (d2 <= r2) {
          report.violations.push_back({a, b, trajectories[a].times[k]});
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace slitflow
