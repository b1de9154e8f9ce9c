#pragma once

// Fourth-order finite-difference stencils on uniform lines. Interior points
// use centred five-point formulas; the two outermost points on each side use
// six-point one-sided (outermost) or skewed (next-to-outermost) formulas, so
// every point of the line gets an O(h^4) estimate.

#include <cstddef>
#include <span>
#include <vector>

#include "slitflow/core.hpp"

namespace slitflow {

enum class StencilKind { left_edge, left_skewed, interior, right_skewed, right_edge };

/// Classification of every index along one axis.
class StencilPlan {
 public:
  explicit StencilPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  StencilKind kind(std::size_t i) const noexcept {
    if (i == 0) return StencilKind::left_edge;
    if (i == 1) return StencilKind::left_skewed;
    if (i + 2 == n_) return StencilKind::right_skewed;
    if (i + 1 == n_) return StencilKind::right_edge;
    return StencilKind::interior;
  }

 private:
  std::size_t n_;
};

namespace stencil {

/// Second derivative along a strided line of n values.
/// out[k*stride] = scale * f''(x_k); when accumulate is set the result is
/// added to out instead of overwriting it.
void second_derivative_line(const double* in, double* out, std::size_t n, std::ptrdiff_t stride,
                            double spacing, double scale = 1.0, bool accumulate = false);

/// First derivative along a strided line, same conventions.
void first_derivative_line(const double* in, double* out, std::size_t n, std::ptrdiff_t stride,
                           double spacing, double scale = 1.0, bool accumulate = false);

}  // namespace stencil

/// Second derivative of samples with the given spacing. Throws GridTooSmall
/// for fewer than 11 samples.
std::vector<double> laplacian_1d(std::span<const double> values, double spacing);
std::vector<double> laplacian_1d(std::span<const double> values, const UniformGrid& grid);

/// Sum of the axis-wise second derivatives on a 2D grid.
std::vector<double> laplacian_2d(std::span<const double> values, const UniformGrid& grid);

/// Laplacian on a grid of either dimension, written into `out`.
/// With accumulate, out += scale * lap(in); otherwise out = scale * lap(in).
void apply_laplacian(std::span<const double> in, std::span<double> out, const UniformGrid& grid,
                     double scale = 1.0, bool accumulate = false);

/// Partial derivative along `axis` (0 = y1, 1 = y2).
std::vector<double> partial_derivative(std::span<const double> values, const UniformGrid& grid,
                                       int axis);

}  // namespace slitflow
