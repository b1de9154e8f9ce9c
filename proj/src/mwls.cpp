#include "slitflow/mwls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "slitflow/error.hpp"

namespace slitflow {

namespace {

double distance_sq(const Coord& a, const Coord& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw InvalidArgument("MWLS supports 1D and 2D point sets");
}

// Sorts candidate indices by (distance, index) and keeps the first n.
std::vector<std::size_t> nearest_of(std::span<const Coord> points, int dim, const Coord& r0,
                                    std::vector<std::size_t> candidates, std::size_t n) {
  std::vector<std::pair<double, std::size_t>> keyed;
  keyed.reserve(candidates.size());
  for (std::size_t i : candidates) {
    const double d = distance_sq(points[i], r0, dim);
    if (d > 0.0) keyed.emplace_back(d, i);
  }
  if (keyed.size() < n) {
    throw TooFewPoints("need " + std::to_string(n) + " neighbours, only " +
                       std::to_string(keyed.size()) + " available");
  }
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(n), keyed.end());
  std::vector<std::size_t> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = keyed[k].second;
  return out;
}

}  // namespace

std::size_t MwlsConfig::basis_size(int dim) const {
  const auto p = static_cast<std::size_t>(std::max(order, 0));
  return dim == 1 ? p + 1 : (p + 1) * (p + 2) / 2;
}

void MwlsConfig::validate(int dim) const {
  check_dim(dim);
  if (order < 2) throw InvalidArgument("MWLS order must be at least 2");
  if (neighbors < basis_size(dim)) {
    throw InvalidArgument("MWLS needs at least " + std::to_string(basis_size(dim)) +
                          " neighbours for order " + std::to_string(order));
  }
  if (weight_width && !(*weight_width > 0.0)) {
    throw InvalidArgument("MWLS weight width must be positive");
  }
}

std::vector<std::pair<int, int>> monomial_exponents(int dim, int order) {
  check_dim(dim);
  std::vector<std::pair<int, int>> out;
  for (int degree = 0; degree <= order; ++degree) {
    if (dim == 1) {
      out.emplace_back(degree, 0);
      continue;
    }
    for (int px = degree; px >= 0; --px) out.emplace_back(px, degree - px);
  }
  return out;
}

std::vector<std::size_t> select_neighbors(std::span<const Coord> points, int dim, const Coord& r0,
                                          std::size_t n) {
  check_dim(dim);
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return nearest_of(points, dim, r0, std::move(all), n);
}

std::vector<double> gaussian_weights(std::span<const Coord> points, int dim, const Coord& r0,
                                     std::optional<double> width) {
  check_dim(dim);
  double w = 0.0;
  if (width) {
    w = *width;
  } else {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& p : points) {
      const double d = std::sqrt(distance_sq(p, r0, dim));
      if (d > 0.0) {
        sum += d;
        ++count;
      }
    }
    w = count > 0 ? sum / static_cast<double>(count) : 1.0;
  }
  std::vector<double> sigma(points.size(), 1.0);
  if (std::isinf(w)) return sigma;
  for (std::size_t k = 0; k < points.size(); ++k) {
    sigma[k] = std::exp(distance_sq(points[k], r0, dim) / (2.0 * w * w));
  }
  return sigma;
}

LocalFit::LocalFit(std::span<const Coord> points, std::vector<std::size_t> stencil, int dim,
                   const Coord& r0, std::span<const double> sigmas, int order)
    : stencil_(std::move(stencil)),
      dim_(dim),
      order_(order),
      scale_(0.0),
      condition_(0.0),
      exponents_(monomial_exponents(dim, order)) {
  const std::size_t n = stencil_.size();
  const std::size_t m = exponents_.size();
  if (sigmas.size() != n) throw InvalidArgument("one standard error per stencil point required");
  if (n < m) {
    throw TooFewPoints("least squares fit of " + std::to_string(m) + " coefficients from " +
                       std::to_string(n) + " points is underdetermined");
  }
  for (std::size_t i : stencil_) {
    scale_ = std::max(scale_, std::sqrt(distance_sq(points[i], r0, dim)));
  }
  if (!(scale_ > 0.0)) throw TooFewPoints("all stencil points coincide with the expansion point");

  // Work in u = (r - r0) / scale so that the normal matrix stays O(1).
  Eigen::MatrixXd a(n, m);
  for (std::size_t row = 0; row < n; ++row) {
    const Coord& p = points[stencil_[row]];
    const double ux = (p[0] - r0[0]) / scale_;
    const double uy = dim == 2 ? (p[1] - r0[1]) / scale_ : 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      const auto [ex, ey] = exponents_[s];
      double v = 1.0;
      for (int k = 0; k < ex; ++k) v *= ux;
      for (int k = 0; k < ey; ++k) v *= uy;
      a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(s)) = v / sigmas[row];
    }
  }
  const Eigen::MatrixXd normal = a.transpose() * a;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  condition_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition_ <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "normal matrix condition " << condition_ << " exceeds " << kMaxCondition
        << " at (" << r0[0];
    if (dim == 2) msg << ", " << r0[1];
    msg << ")";
    throw IllConditioned(msg.str(), condition_);
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw IllConditioned("normal matrix is not positive definite", condition_);
  }
  Eigen::MatrixXd rhs = a.transpose();
  for (std::size_t row = 0; row < n; ++row) {
    rhs.col(static_cast<Eigen::Index>(row)) /= sigmas[row];
  }
  projection_ = llt.solve(rhs);
}

LocalFit LocalFit::build(std::span<const Coord> points, int dim, const Coord& r0,
                         const MwlsConfig& config) {
  return build(points, dim, r0, config, select_neighbors(points, dim, r0, config.neighbors));
}

LocalFit LocalFit::build(std::span<const Coord> points, int dim, const Coord& r0,
                         const MwlsConfig& config, std::vector<std::size_t> neighbors) {
  config.validate(dim);
  std::vector<std::size_t> stencil;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (distance_sq(points[i], r0, dim) == 0.0) stencil.push_back(i);
  }
  stencil.insert(stencil.end(), neighbors.begin(), neighbors.end());

  std::vector<Coord> local(stencil.size());
  for (std::size_t k = 0; k < stencil.size(); ++k) local[k] = points[stencil[k]];
  std::vector<double> sigmas;
  if (config.weight_width) {
    sigmas = gaussian_weights(local, dim, r0, config.weight_width);
  } else {
    // Auto width: mean distance to the selected neighbours.
    double sum = 0.0;
    for (std::size_t i : neighbors) sum += std::sqrt(distance_sq(points[i], r0, dim));
    sigmas = gaussian_weights(local, dim, r0, sum / static_cast<double>(neighbors.size()));
  }
  return LocalFit(points, std::move(stencil), dim, r0, sigmas, config.order);
}

Eigen::VectorXd LocalFit::coefficients(std::span<const double> values) const {
  Eigen::VectorXd f(static_cast<Eigen::Index>(stencil_.size()));
  for (std::size_t k = 0; k < stencil_.size(); ++k) {
    f(static_cast<Eigen::Index>(k)) = values[stencil_[k]];
  }
  Eigen::VectorXd a = projection_ * f;
  for (std::size_t s = 0; s < exponents_.size(); ++s) {
    const int degree = exponents_[s].first + exponents_[s].second;
    a(static_cast<Eigen::Index>(s)) /= std::pow(scale_, degree);
  }
  return a;
}

DerivativeJet LocalFit::jet(std::span<const double> values) const {
  const Eigen::VectorXd a = coefficients(values);
  DerivativeJet j;
  j.value = a(0);
  j.condition = condition_;
  if (dim_ == 1) {
    j.gradient = {a(1), 0.0};
    j.laplacian = 2.0 * a(2);
  } else {
    // Order 1, x, y, x^2, xy, y^2, ...
    j.gradient = {a(1), a(2)};
    j.laplacian = 2.0 * (a(3) + a(5));
  }
  return j;
}

Eigen::VectorXd fit(std::span<const Coord> points, std::span<const double> values, int dim,
                    const Coord& r0, std::span<const double> sigmas, int order) {
  check_dim(dim);
  if (values.size() != points.size()) throw InvalidArgument("one value per point required");
  std::vector<std::size_t> stencil(points.size());
  std::iota(stencil.begin(), stencil.end(), std::size_t{0});
  return LocalFit(points, std::move(stencil), dim, r0, sigmas, order).coefficients(values);
}

DerivativeJet derivative_jet(std::span<const Coord> points, std::span<const double> values,
                             int dim, const Coord& r0, const MwlsConfig& config) {
  if (values.size() != points.size()) throw InvalidArgument("one value per point required");
  return LocalFit::build(points, dim, r0, config).jet(values);
}

NeighborFinder::NeighborFinder(std::span<const Coord> points, int dim)
    : points_(points), dim_(dim) {
  check_dim(dim);
  if (dim != 1) return;
  order_.resize(points.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    return points[a][0] < points[b][0] || (points[a][0] == points[b][0] && a < b);
  });
  rank_.resize(points.size());
  for (std::size_t r = 0; r < order_.size(); ++r) rank_[order_[r]] = r;
}

std::vector<std::size_t> NeighborFinder::neighbors_of(std::size_t index, std::size_t n) const {
  const Coord& r0 = points_[index];
  if (dim_ != 1) return select_neighbors(points_, dim_, r0, n);

  const std::size_t total = order_.size();
  const std::size_t p = rank_[index];
  // Grow a rank window until the n-th nearest candidate is provably nearer
  // than everything outside it.
  for (std::size_t half = n + 2;; half *= 2) {
    const std::size_t lo = p >= half ? p - half : 0;
    const std::size_t hi = std::min(total - 1, p + half);
    std::vector<std::size_t> candidates(order_.begin() + static_cast<std::ptrdiff_t>(lo),
                                        order_.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    const bool whole = lo == 0 && hi == total - 1;
    std::size_t usable = 0;
    for (std::size_t i : candidates) usable += distance_sq(points_[i], r0, 1) > 0.0 ? 1 : 0;
    if (usable < n) {
      if (whole) return nearest_of(points_, 1, r0, std::move(candidates), n);
      continue;
    }
    auto chosen = nearest_of(points_, 1, r0, candidates, n);
    const double worst = distance_sq(points_[chosen.back()], r0, 1);
    const bool left_ok = lo == 0 || distance_sq(points_[order_[lo - 1]], r0, 1) > worst;
    const bool right_ok = hi == total - 1 || distance_sq(points_[order_[hi + 1]], r0, 1) > worst;
    if (left_ok && right_ok) return chosen;
  }
}

}  // namespace slitflow
