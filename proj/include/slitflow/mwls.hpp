#pragma once

// Moving weighted least squares: at an expansion point r0, fit a polynomial
// in (r - r0) to samples at neighbouring points, weighting each sample by a
// Gaussian in its distance to r0, and read derivatives off the coefficients.
//
// Basis: monomials ordered by total degree, then by decreasing power of the
// first coordinate. In 2D with order 2 this is 1, x, y, x^2, xy, y^2.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "slitflow/core.hpp"

namespace slitflow {

struct MwlsConfig {
  std::size_t neighbors = 12;
  int order = 5;
  /// Gaussian width; nullopt selects the mean distance from r0 to its
  /// neighbours. +infinity gives unweighted least squares.
  std::optional<double> weight_width;

  /// Number of basis monomials in the given dimension.
  std::size_t basis_size(int dim) const;
  void validate(int dim) const;
};

/// Fitted value, gradient and Laplacian at the expansion point.
struct DerivativeJet {
  double value = 0.0;
  Coord gradient{};
  double laplacian = 0.0;
  double condition = 0.0;  ///< 2-norm condition number of the scaled normal matrix
};

/// Fits whose scaled normal matrix exceeds this condition number are rejected.
inline constexpr double kMaxCondition = 1e12;

/// Exponent pairs of the monomial basis, in basis order.
std::vector<std::pair<int, int>> monomial_exponents(int dim, int order);

/// The n nearest points to r0, excluding points that coincide with r0.
/// Ties are broken by index. Throws TooFewPoints when fewer than n
/// candidates exist.
std::vector<std::size_t> select_neighbors(std::span<const Coord> points, int dim, const Coord& r0,
                                          std::size_t n);

/// Standard errors sigma_n = exp(|r_n - r0|^2 / (2 w^2)); larger sigma means
/// smaller weight. With no width, w is the mean distance of the points to r0.
std::vector<double> gaussian_weights(std::span<const Coord> points, int dim, const Coord& r0,
                                     std::optional<double> width);

/// Weighted least-squares polynomial coefficients through the given samples
/// (all points are used). Coefficients are with respect to unscaled (r - r0).
/// Throws IllConditioned when the normal matrix cannot be trusted.
Eigen::VectorXd fit(std::span<const Coord> points, std::span<const double> values, int dim,
                    const Coord& r0, std::span<const double> sigmas, int order);

/// Factorized fit for one expansion point. The same factorization serves any
/// number of sampled functions on the same point set.
class LocalFit {
 public:
  /// Uses `stencil` (indices into `points`) with the given standard errors.
  LocalFit(std::span<const Coord> points, std::vector<std::size_t> stencil, int dim,
           const Coord& r0, std::span<const double> sigmas, int order);

  /// Selects the stencil (coincident points plus config.neighbors nearest)
  /// and the Gaussian weights from the configuration.
  static LocalFit build(std::span<const Coord> points, int dim, const Coord& r0,
                        const MwlsConfig& config);
  /// Same as build, with a precomputed neighbour list.
  static LocalFit build(std::span<const Coord> points, int dim, const Coord& r0,
                        const MwlsConfig& config, std::vector<std::size_t> neighbors);

  const std::vector<std::size_t>& stencil() const noexcept { return stencil_; }
  double condition() const noexcept { return condition_; }

  /// Coefficients for a function sampled at every point of the original set.
  Eigen::VectorXd coefficients(std::span<const double> values) const;
  DerivativeJet jet(std::span<const double> values) const;

 private:
  std::vector<std::size_t> stencil_;
  int dim_;
  int order_;
  double scale_;
  double condition_;
  std::vector<std::pair<int, int>> exponents_;
  Eigen::MatrixXd projection_;  // maps stencil samples to scaled coefficients
};

/// Composition of select_neighbors, gaussian_weights and fit.
DerivativeJet derivative_jet(std::span<const Coord> points, std::span<const double> values,
                             int dim, const Coord& r0, const MwlsConfig& config);

/// Neighbour lookup for every member of a point set. In 1D this uses a sorted
/// order and returns exactly what select_neighbors would.
class NeighborFinder {
 public:
  NeighborFinder(std::span<const Coord> points, int dim);

  std::vector<std::size_t> neighbors_of(std::size_t index, std::size_t n) const;

 private:
  std::span<const Coord> points_;
  int dim_;
  std::vector<std::size_t> order_;  // indices sorted by coordinate (1D)
  std::vector<std::size_t> rank_;
};

}  // namespace slitflow
