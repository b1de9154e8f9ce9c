#include "slitflow/stencil.hpp"

#include <string>

#include "slitflow/error.hpp"

namespace slitflow {

StencilPlan::StencilPlan(std::size_t n) : n_(n) {
  if (n < UniformGrid::kMinPoints) {
    throw GridTooSmall("stencils need at least " + std::to_string(UniformGrid::kMinPoints) +
                       " points per axis, got " + std::to_string(n));
  }
}

namespace {

// Numerators of the second-derivative formulas (denominator 12 h^2).
inline double d2_interior(double fm2, double fm1, double f0, double fp1, double fp2) {
  return -30.0 * f0 + 16.0 * (fp1 + fm1) - (fp2 + fm2);
}
inline double d2_edge(double f0, double f1, double f2, double f3, double f4, double f5) {
  return 45.0 * f0 - 154.0 * f1 + 214.0 * f2 - 156.0 * f3 + 61.0 * f4 - 10.0 * f5;
}
// `outer` is the single neighbour on the boundary side.
inline double d2_skewed(double outer, double f0, double f1, double f2, double f3, double f4) {
  return 10.0 * outer - 15.0 * f0 - 4.0 * f1 + 14.0 * f2 - 6.0 * f3 + f4;
}

// Numerators of the first-derivative formulas (denominator 12 h). The right
// side uses the mirrored formulas with flipped sign.
inline double d1_interior(double fm2, double fm1, double fp1, double fp2) {
  return (fm2 - fp2) + 8.0 * (fp1 - fm1);
}
inline double d1_edge(double f0, double f1, double f2, double f3, double f4) {
  return -25.0 * f0 + 48.0 * f1 - 36.0 * f2 + 16.0 * f3 - 3.0 * f4;
}
inline double d1_skewed(double outer, double f0, double f1, double f2, double f3) {
  return -3.0 * outer - 10.0 * f0 + 18.0 * f1 - 6.0 * f2 + f3;
}

void check_line(std::size_t n) {
  if (n < UniformGrid::kMinPoints) {
    throw GridTooSmall("stencils need at least " + std::to_string(UniformGrid::kMinPoints) +
                       " points, got " + std::to_string(n));
  }
}

inline void store(double* out, double value, bool accumulate) {
  if (accumulate) {
    *out += value;
  } else {
    *out = value;
  }
}

// Second derivative along axis 0 of a row-major n x n array, processed row by
// row so the inner loop runs over contiguous memory. The per-element
// arithmetic is identical to second_derivative_line, which keeps the 2D
// Laplacian exactly symmetric under transposition.
void second_derivative_rows(const double* in, double* out, std::size_t n, double c,
                            bool accumulate) {
  auto row = [in, n](std::size_t i) { return in + i * n; };
  for (std::size_t i = 0; i < n; ++i) {
    double* o = out + i * n;
    if (i >= 2 && i + 2 < n) {
      const double *m2 = row(i - 2), *m1 = row(i - 1), *z = row(i), *p1 = row(i + 1),
                   *p2 = row(i + 2);
      for (std::size_t j = 0; j < n; ++j) {
        store(o + j, c * d2_interior(m2[j], m1[j], z[j], p1[j], p2[j]), accumulate);
      }
    } else if (i == 0) {
      for (std::size_t j = 0; j < n; ++j) {
        store(o + j,
              c * d2_edge(row(0)[j], row(1)[j], row(2)[j], row(3)[j], row(4)[j], row(5)[j]),
              accumulate);
      }
    } else if (i == 1) {
      for (std::size_t j = 0; j < n; ++j) {
        store(o + j,
              c * d2_skewed(row(0)[j], row(1)[j], row(2)[j], row(3)[j], row(4)[j], row(5)[j]),
              accumulate);
      }
    } else if (i + 2 == n) {
      for (std::size_t j = 0; j < n; ++j) {
        store(o + j,
              c * d2_skewed(row(n - 1)[j], row(n - 2)[j], row(n - 3)[j], row(n - 4)[j],
                            row(n - 5)[j], row(n - 6)[j]),
              accumulate);
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        store(o + j,
              c * d2_edge(row(n - 1)[j], row(n - 2)[j], row(n - 3)[j], row(n - 4)[j],
                          row(n - 5)[j], row(n - 6)[j]),
              accumulate);
      }
    }
  }
}

}  // namespace

namespace stencil {

void second_derivative_line(const double* in, double* out, std::size_t n, std::ptrdiff_t stride,
                            double spacing, double scale, bool accumulate) {
  check_line(n);
  const double c = scale / (12.0 * spacing * spacing);
  auto f = [in, stride](std::size_t k) { return in[static_cast<std::ptrdiff_t>(k) * stride]; };
  auto o = [out, stride](std::size_t k) { return out + static_cast<std::ptrdiff_t>(k) * stride; };

  store(o(0), c * d2_edge(f(0), f(1), f(2), f(3), f(4), f(5)), accumulate);
  store(o(1), c * d2_skewed(f(0), f(1), f(2), f(3), f(4), f(5)), accumulate);
  for (std::size_t k = 2; k + 2 < n; ++k) {
    store(o(k), c * d2_interior(f(k - 2), f(k - 1), f(k), f(k + 1), f(k + 2)), accumulate);
  }
  store(o(n - 2),
        c * d2_skewed(f(n - 1), f(n - 2), f(n - 3), f(n - 4), f(n - 5), f(n - 6)), accumulate);
  store(o(n - 1), c * d2_edge(f(n - 1), f(n - 2), f(n - 3), f(n - 4), f(n - 5), f(n - 6)),
        accumulate);
}

void first_derivative_line(const double* in, double* out, std::size_t n, std::ptrdiff_t stride,
                           double spacing, double scale, bool accumulate) {
  check_line(n);
  const double c = scale / (12.0 * spacing);
  auto f = [in, stride](std::size_t k) { return in[static_cast<std::ptrdiff_t>(k) * stride]; };
  auto o = [out, stride](std::size_t k) { return out + static_cast<std::ptrdiff_t>(k) * stride; };

  store(o(0), c * d1_edge(f(0), f(1), f(2), f(3), f(4)), accumulate);
  store(o(1), c * d1_skewed(f(0), f(1), f(2), f(3), f(4)), accumulate);
  for (std::size_t k = 2; k + 2 < n; ++k) {
    store(o(k), c * d1_interior(f(k - 2), f(k - 1), f(k + 1), f(k + 2)), accumulate);
  }
  store(o(n - 2), -c * d1_skewed(f(n - 1), f(n - 2), f(n - 3), f(n - 4), f(n - 5)), accumulate);
  store(o(n - 1), -c * d1_edge(f(n - 1), f(n - 2), f(n - 3), f(n - 4), f(n - 5)), accumulate);
}

}  // namespace stencil

std::vector<double> laplacian_1d(std::span<const double> values, double spacing) {
  std::vector<double> out(values.size());
  stencil::second_derivative_line(values.data(), out.data(), values.size(), 1, spacing);
  return out;
}

std::vector<double> laplacian_1d(std::span<const double> values, const UniformGrid& grid) {
  if (grid.dim() != 1 || values.size() != grid.size()) {
    throw InvalidArgument("laplacian_1d expects one value per point of a 1D grid");
  }
  return laplacian_1d(values, grid.spacing());
}

void apply_laplacian(std::span<const double> in, std::span<double> out, const UniformGrid& grid,
                     double scale, bool accumulate) {
  if (in.size() != grid.size() || out.size() != grid.size()) {
    throw InvalidArgument("laplacian input/output size does not match the grid");
  }
  const std::size_t n = grid.points_per_axis();
  const double h = grid.spacing();
  if (grid.dim() == 1) {
    stencil::second_derivative_line(in.data(), out.data(), n, 1, h, scale, accumulate);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    stencil::second_derivative_line(in.data() + i * n, out.data() + i * n, n, 1, h, scale,
                                    accumulate);
  }
  second_derivative_rows(in.data(), out.data(), n, scale / (12.0 * h * h), true);
}

std::vector<double> laplacian_2d(std::span<const double> values, const UniformGrid& grid) {
  if (grid.dim() != 2) throw InvalidArgument("laplacian_2d expects a 2D grid");
  std::vector<double> out(values.size());
  apply_laplacian(values, out, grid);
  return out;
}

std::vector<double> partial_derivative(std::span<const double> values, const UniformGrid& grid,
                                       int axis) {
  if (values.size() != grid.size()) throw InvalidArgument("values do not match the grid");
  if (axis < 0 || axis >= grid.dim()) throw InvalidArgument("axis out of range");
  const std::size_t n = grid.points_per_axis();
  const double h = grid.spacing();
  std::vector<double> out(values.size());
  if (grid.dim() == 1) {
    stencil::first_derivative_line(values.data(), out.data(), n, 1, h);
  } else if (axis == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      stencil::first_derivative_line(values.data() + i * n, out.data() + i * n, n, 1, h);
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      stencil::first_derivative_line(values.data() + j, out.data() + j, n,
                                     static_cast<std::ptrdiff_t>(n), h);
    }
  }
  return out;
}

}  // namespace slitflow
