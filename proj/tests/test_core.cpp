#include <doctest.h>

#include <cmath>

#include "slitflow/analytic.hpp"
#include "slitflow/core.hpp"
#include "slitflow/error.hpp"

using namespace slitflow;

TEST_CASE("packet parameter defaults and invariants") {
  WavePacketParams p;
  CHECK(p.slit_offset == 1.0);
  CHECK(p.sigma0 == 0.2);
  CHECK(p.kx == 0.1);
  CHECK_NOTHROW(p.validate());

  WavePacketParams bad = p;
  bad.sigma0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = p;
  bad.slit_offset = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = p;
  bad.particles = 3;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = p;
  bad.exchange_sign = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("uniform grid geometry") {
  const UniformGrid g(1, -13.0, 13.0, 261);
  CHECK(g.spacing() == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(g.coordinate(0) == -13.0);
  CHECK(g.coordinate(260) == doctest::Approx(13.0).epsilon(1e-14));
  CHECK(g.size() == 261);

  const UniformGrid g2(2, -1.0, 1.0, 11);
  CHECK(g2.size() == 121);
  CHECK(g2.flat_index(3, 7) == 3 * 11 + 7);
  const Coord p = g2.point(g2.flat_index(3, 7));
  CHECK(p[0] == doctest::Approx(-0.4));
  CHECK(p[1] == doctest::Approx(0.4));
  CHECK(g2.contains_strictly({0.0, 0.0}));
  CHECK_FALSE(g2.contains_strictly({1.0, 0.0}));

  CHECK_THROWS_AS(UniformGrid(1, 0.0, 1.0, 10), GridTooSmall);
  CHECK_NOTHROW(UniformGrid(1, 0.0, 1.0, 11));
  CHECK_THROWS_AS(UniformGrid(3, 0.0, 1.0, 11), InvalidArgument);
  CHECK_THROWS_AS(UniformGrid(1, 1.0, 0.0, 11), InvalidArgument);
}

TEST_CASE("complex field holds one value per point") {
  const UniformGrid g(1, 0.0, 1.0, 11);
  CHECK_THROWS_AS(ComplexField(g, std::vector<double>(10), std::vector<double>(11)),
                  InvalidArgument);
  ComplexField f(g);
  f.re[4] = 3.0;
  f.im[4] = 4.0;
  CHECK(probability_density(f, 4) == 25.0);
  CHECK(probability_density(f, 3) == 0.0);
}

TEST_CASE("norm by the trapezoidal rule") {
  const UniformGrid g(1, -13.0, 13.0, 261);
  const WavePacketParams p;
  CHECK(norm(ComplexField(g)) == 0.0);

  const ExactField single(p, FieldKind::single_slit);
  CHECK(norm(sample_field(single, g, 0.0)) == doctest::Approx(1.0).epsilon(1e-10));

  const ExactField one(p, FieldKind::one_particle);
  CHECK(std::abs(norm(sample_field(one, g, 0.0)) - 1.0) < 1e-8);

  // Iterated trapezoid in 2D: the product state integrates to the product of
  // the 1D norms.
  WavePacketParams p2 = p;
  p2.particles = 2;
  const UniformGrid g2(2, -13.0, 13.0, 261);
  CHECK(std::abs(norm(sample_field(ExactField(p2, FieldKind::two_particle), g2, 0.0)) - 1.0) <
        1e-8);
}

TEST_CASE("density at the quasinode between the slits") {
  const WavePacketParams p;
  const ExactField one(p, FieldKind::one_particle);
  const double at_node = std::norm(one.psi({0.0, 0.0}, 0.0));
  const double at_slit = std::norm(one.psi({1.0, 0.0}, 0.0));
  // 4 e^{-12.5} / (1 + e^{-12.5})^2, independently evaluated with mpmath.
  CHECK(at_node / at_slit == doctest::Approx(1.490661268790064e-05).epsilon(1e-12));
}

TEST_CASE("provenance names") {
  CHECK(to_string(Provenance::exact) == "exact");
  CHECK(to_string(Provenance::fd) == "fd");
  CHECK(to_string(Provenance::hydro) == "hydro");
}
