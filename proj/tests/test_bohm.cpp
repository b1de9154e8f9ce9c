#include <doctest.h>

#include <cmath>
#include <vector>

#include "slitflow/analytic.hpp"
#include "slitflow/bohm.hpp"
#include "slitflow/error.hpp"
#include "slitflow/fd_solver.hpp"

using namespace slitflow;

namespace {

VelocityField cubic_field(const UniformGrid& g) {
  VelocityField vf{g, std::vector<Coord>(g.size()), std::vector<std::uint8_t>(g.size(), 0)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Coord p = g.point(k);
    vf.velocity[k] = {p[0] * p[0] * p[0] - p[0], g.dim() == 2 ? p[1] * p[1] * p[0] : 0.0};
  }
  return vf;
}

Trajectory path(std::vector<double> ys) {
  Trajectory t;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    t.times.push_back(0.1 * static_cast<double>(k));
    t.positions.push_back({ys[k], 0.0});
  }
  return t;
}

}  // namespace

TEST_CASE("velocity of sampled fields") {
  const UniformGrid g(1, -3.0, 3.0, 61);
  ComplexField real(g);
  for (std::size_t k = 0; k < g.size(); ++k) real.re[k] = std::exp(-g.coordinate(k) * g.coordinate(k));
  const VelocityField v0 = velocity_field(real);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(v0.velocity[k][0] == 0.0);

  // A plane wave e^{iky} moves at k.
  ComplexField plane(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    plane.re[k] = std::cos(0.8 * g.coordinate(k));
    plane.im[k] = std::sin(0.8 * g.coordinate(k));
  }
  for (const auto& v : velocity_field(plane).velocity) CHECK(v[0] == doctest::Approx(0.8).epsilon(1e-5));

  const WavePacketParams p;
  const ExactField ex(p, FieldKind::one_particle);
  const UniformGrid wide(1, -13.0, 13.0, 261);
  const VelocityField vs = velocity_field(sample_field(ex, wide, 0.5));
  for (std::size_t k = 0; k < wide.size(); ++k) {
    const std::size_t m = wide.size() - 1 - k;
    CHECK(vs.masked[k] == vs.masked[m]);
    CHECK(vs.velocity[k][0] == doctest::Approx(-vs.velocity[m][0]).epsilon(1e-10));
  }
}

TEST_CASE("nodes are masked") {
  const UniformGrid g(1, -2.0, 2.0, 41);
  ComplexField f(g);
  for (std::size_t k = 0; k < g.size(); ++k) f.re[k] = g.coordinate(k);  // node at y = 0
  const VelocityField vf = velocity_field(f);
  CHECK(vf.masked[20] == 1);
  CHECK(vf.masked[19] == 0);

  ComplexField hole(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double y = g.coordinate(k);
    hole.re[k] = std::abs(y) < 0.25 ? 0.0 : 1.0;
  }
  const VelocityField hv = velocity_field(hole);
  CHECK_THROWS_AS(interpolate_velocity(hv, {0.05, 0.0}), MaskedRegion);
  CHECK_NOTHROW(interpolate_velocity(hv, {1.0, 0.0}));
}

TEST_CASE("cubic interpolation is exact for cubics") {
  const UniformGrid g(1, -2.0, 2.0, 21);
  const VelocityField vf = cubic_field(g);
  CHECK(interpolate_velocity(vf, {g.coordinate(7), 0.0})[0] == vf.velocity[7][0]);
  for (double y : {-2.0, -1.93, -0.37, 0.0, 0.51, 1.99, 2.0}) {
    CHECK(interpolate_velocity(vf, {y, 0.0})[0] == doctest::Approx(y * y * y - y).epsilon(1e-12));
  }
  CHECK_THROWS_AS(interpolate_velocity(vf, {2.01, 0.0}), InvalidArgument);

  const UniformGrid g2(2, -1.0, 1.0, 11);
  const VelocityField v2 = cubic_field(g2);
  const Coord r{0.33, -0.71};
  const Coord got = interpolate_velocity(v2, r);
  CHECK(got[0] == doctest::Approx(r[0] * r[0] * r[0] - r[0]).epsilon(1e-12));
  CHECK(got[1] == doctest::Approx(r[1] * r[1] * r[0]).epsilon(1e-12));
}

TEST_CASE("interpolated velocity converges at fourth order") {
  const WavePacketParams p;
  const ExactField ex(p, FieldKind::single_slit);
  auto err = [&](std::size_t n) {
    const UniformGrid g(1, -3.0, 5.0, n);
    const VelocityField vf = velocity_field(sample_field(ex, g, 0.3));
    double worst = 0.0;
    for (double y = 0.0; y <= 2.0; y += 0.0137) {
      worst = std::max(worst, std::abs(interpolate_velocity(vf, {y, 0.0})[0] -
                                       exact_velocity(ex, {y, 0.0}, 0.3)[0]));
    }
    return worst;
  };
  const double e1 = err(161), e2 = err(321);
  CHECK(e1 < 1e-3);
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("trajectory through the grid solver") {
  const WavePacketParams p;
  const ExactField single(p, FieldKind::single_slit);
  // sigma0 = 0.2 spans only two points at spacing 0.1, which costs 5e-3 on
  // this path; spacing 0.05 resolves the initial packet.
  const UniformGrid g(1, -13.0, 13.0, 521);
  SchrodingerFieldSource src(FdState(sample_field(single, g, 0.0)), 2e-4);
  const Trajectory t = integrate_trajectory(src, {1.2, 0.0}, 0.0, 1.0, 2e-4);
  CHECK(t.provenance == Provenance::fd);
  CHECK(t.times.size() == 5001);
  CHECK(std::abs(t.positions.back()[0] - 3.507987240796890) < 1e-3);

  SchrodingerFieldSource wrong(FdState(sample_field(single, g, 0.0)), 1e-4);
  CHECK_THROWS_AS(integrate_trajectory(wrong, {1.2, 0.0}, 0.0, 1.0, 2e-4), InvalidArgument);
}

TEST_CASE("exact field source and the symmetry axis") {
  const WavePacketParams p;
  const ExactField one(p, FieldKind::one_particle);
  const UniformGrid g(1, -13.0, 13.0, 261);
  ExactFieldSource src(one, g, 1e-3);
  const Trajectory axis = integrate_trajectory(src, {0.0, 0.0}, 0.0, 0.2, 1e-3, Provenance::exact);
  for (const auto& r : axis.positions) CHECK(std::abs(r[0]) < 1e-12);

  // Exact fields on the grid: the remaining error is the spatial one and
  // drops sixteenfold when the spacing halves.
  const ExactField single(p, FieldKind::single_slit);
  std::vector<double> times;
  for (int k = 0; k <= 200; ++k) times.push_back(k * 1e-3);
  const double ref = exact_trajectory(single, {1.2, 0.0}, times).positions.back()[0];
  auto deviation = [&](std::size_t n) {
    ExactFieldSource s(single, UniformGrid(1, -13.0, 13.0, n), 1e-3);
    return std::abs(integrate_trajectory(s, {1.2, 0.0}, 0.0, 0.2, 1e-3).positions.back()[0] - ref);
  };
  const double coarse = deviation(261), fine = deviation(521);
  CHECK(fine < 2e-4);
  CHECK(std::log2(coarse / fine) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("trajectory integrator records failures and continues") {
  const UniformGrid g(1, -2.0, 2.0, 41);
  ComplexField f(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double y = g.coordinate(k);
    f.re[k] = std::abs(y) < 0.25 ? 0.0 : std::cos(3.0 * y);
    f.im[k] = std::abs(y) < 0.25 ? 0.0 : std::sin(3.0 * y);
  }
  TrajectoryIntegrator ti({{0.0, 0.0}, {1.0, 0.0}, {1.99, 0.0}}, f, 0.0, Provenance::fd);
  CHECK(ti.failures()[0].has_value());
  CHECK_FALSE(ti.failures()[1].has_value());
  ti.advance(f, 0.01);
  CHECK(std::abs(ti.trajectories()[1].positions.back()[0] - 1.03) < 1e-5);
  // The third point leaves the grid within the step.
  CHECK(ti.failures()[2].has_value());
  CHECK(ti.trajectories()[2].positions.size() == 1);
  CHECK_THROWS_AS(ti.advance(f, 0.01), InvalidArgument);
}

TEST_CASE("crossing report") {
  const std::vector<Trajectory> fan{path({-1.0, -1.2, -1.5}), path({0.0, 0.0, 0.0}),
                                    path({1.0, 1.3, 1.6})};
  CHECK(crossing_report(fan).ok());

  const std::vector<Trajectory> twins{path({0.5, 0.6}), path({0.5, 0.6})};
  const auto r = crossing_report(twins);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].t == 0.0);

  const std::vector<Trajectory> swap{path({0.0, 0.2, 0.6}), path({0.5, 0.5, 0.5})};
  const auto s = crossing_report(swap);
  REQUIRE(s.violations.size() == 1);
  CHECK(s.violations[0].t == doctest::Approx(0.2));

  auto path2 = [](double y1, double y2) {
    Trajectory t;
    t.dim = 2;
    t.times = {0.0, 0.1};
    t.positions = {{y1, y2}, {y1 + 0.1, y2}};
    return t;
  };
  const std::vector<Trajectory> plane{path2(0.0, 0.0), path2(0.0, 0.05), path2(1.0, 1.0)};
  CHECK(crossing_report(plane, 0.01).ok());
  CHECK(crossing_report(plane, 0.06).violations.size() == 1);
}
