#include <doctest.h>

#include <cmath>
#include <vector>

#include "order_checks.hpp"
#include "slitflow/error.hpp"
#include "slitflow/stencil.hpp"

using namespace slitflow;

TEST_CASE("stencil plan classification") {
  const StencilPlan plan(11);
  CHECK(plan.kind(0) == StencilKind::left_edge);
  CHECK(plan.kind(1) == StencilKind::left_skewed);
  for (std::size_t i = 2; i <= 8; ++i) CHECK(plan.kind(i) == StencilKind::interior);
  CHECK(plan.kind(9) == StencilKind::right_skewed);
  CHECK(plan.kind(10) == StencilKind::right_edge);
  CHECK_THROWS_AS(StencilPlan(10), GridTooSmall);
}

TEST_CASE("quadratics are differentiated exactly everywhere") {
  const UniformGrid g(1, -1.3, 2.1, 23);
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = g.coordinate(k) * g.coordinate(k);
  for (double d : laplacian_1d(v, g)) CHECK(d == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(laplacian_1d(std::vector<double>(10, 0.0), 0.1), GridTooSmall);
}

TEST_CASE("hand evaluation of the interior stencil") {
  // f = x^4 on the integers -4..6; the point x = 1 sits in the interior.
  std::vector<double> v;
  for (int x = -4; x <= 6; ++x) v.push_back(std::pow(x, 4));
  const auto lap = laplacian_1d(v, 1.0);
  CHECK(lap[5] == doctest::Approx(12.0).epsilon(1e-14));
}

TEST_CASE("boundary stencils are fourth order too") {
  // A quartic is reproduced exactly by every six-point formula.
  const UniformGrid g(1, 0.0, 1.0, 11);
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = std::pow(g.coordinate(k) - 0.3, 5);
  const auto lap = laplacian_1d(v, g);
  // x^5 leaves an O(h^4) remainder; compare with the exact 20 (x - 0.3)^3.
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(std::abs(lap[k] - 20.0 * std::pow(g.coordinate(k) - 0.3, 3)) < 5e-3);
  }
  std::vector<double> q(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) q[k] = std::pow(g.coordinate(k), 4);
  const auto lq = laplacian_1d(q, g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(lq[k] == doctest::Approx(12.0 * std::pow(g.coordinate(k), 2)).epsilon(1e-9));
  }
}

TEST_CASE("laplacian of sin converges at fourth order") {
  auto f = [](double x) { return std::sin(x); };
  auto f2 = [](double x) { return -std::sin(x); };
  CHECK(testing::laplacian_error(f, f2, -13.0, 13.0, 261) < 1e-4);
  const auto orders = testing::laplacian_orders(f, f2, -13.0, 13.0, 261, 3);
  CHECK(orders[0] < orders[1]);
  CHECK(orders[1] < orders[2]);
  CHECK(std::abs(orders.back() - 4.0) < 0.1);
}

TEST_CASE("two-dimensional laplacian") {
  const UniformGrid g(2, -1.0, 1.0, 21);
  std::vector<double> sq(g.size()), prod(g.size()), gauss(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Coord p = g.point(k);
    sq[k] = p[0] * p[0] + p[1] * p[1];
    prod[k] = p[0] * p[1];
    gauss[k] = std::exp(-(p[0] * p[0] + 2.0 * p[1] * p[1]));
  }
  for (double d : laplacian_2d(sq, g)) CHECK(d == doctest::Approx(4.0).epsilon(1e-10));
  for (double d : laplacian_2d(prod, g)) CHECK(std::abs(d) < 1e-10);

  auto error_at = [](std::size_t n) {
    const UniformGrid gg(2, -3.0, 3.0, n);
    std::vector<double> v(gg.size());
    for (std::size_t k = 0; k < gg.size(); ++k) {
      const Coord p = gg.point(k);
      v[k] = std::exp(-(p[0] * p[0] + 2.0 * p[1] * p[1]));
    }
    const auto lap = laplacian_2d(v, gg);
    double worst = 0.0;
    for (std::size_t k = 0; k < gg.size(); ++k) {
      const Coord p = gg.point(k);
      const double exact = (4.0 * p[0] * p[0] - 2.0 + 16.0 * p[1] * p[1] - 4.0) * v[k];
      worst = std::max(worst, std::abs(lap[k] - exact));
    }
    return worst;
  };
  const double coarse = error_at(61), fine = error_at(121);
  CHECK(std::log2(coarse / fine) == doctest::Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS(laplacian_2d(sq, UniformGrid(1, -1.0, 1.0, 21)), InvalidArgument);
}

TEST_CASE("2D laplacian commutes with the coordinate swap") {
  const UniformGrid g(2, -2.0, 2.0, 31);
  std::vector<double> v(g.size()), swapped(g.size());
  for (std::size_t i = 0; i < 31; ++i) {
    for (std::size_t j = 0; j < 31; ++j) {
      const double a = g.coordinate(i), b = g.coordinate(j);
      v[g.flat_index(i, j)] = std::sin(3.0 * a) * std::exp(-b * b) + a * b * b;
    }
  }
  for (std::size_t i = 0; i < 31; ++i) {
    for (std::size_t j = 0; j < 31; ++j) swapped[g.flat_index(i, j)] = v[g.flat_index(j, i)];
  }
  const auto l = laplacian_2d(v, g);
  const auto ls = laplacian_2d(swapped, g);
  for (std::size_t i = 0; i < 31; ++i) {
    for (std::size_t j = 0; j < 31; ++j) CHECK(ls[g.flat_index(i, j)] == l[g.flat_index(j, i)]);
  }
}

TEST_CASE("first derivatives") {
  const UniformGrid g(1, -2.0, 2.0, 41);
  std::vector<double> cubic(g.size()), s(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = g.coordinate(k);
    cubic[k] = x * x * x - 2.0 * x;
    s[k] = std::sin(x);
  }
  const auto d = partial_derivative(cubic, g, 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = g.coordinate(k);
    CHECK(d[k] == doctest::Approx(3.0 * x * x - 2.0).epsilon(1e-10));
  }
  auto err = [](std::size_t n) {
    const UniformGrid gg(1, -3.0, 3.0, n);
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = std::sin(gg.coordinate(k));
    const auto dv = partial_derivative(v, gg, 0);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(dv[k] - std::cos(gg.coordinate(k))));
    return worst;
  };
  CHECK(std::log2(err(61) / err(121)) == doctest::Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS(partial_derivative(cubic, g, 1), InvalidArgument);
}
