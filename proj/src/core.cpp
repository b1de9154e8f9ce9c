#include "slitflow/core.hpp"

#include <cmath>
#include <string>

#include "slitflow/error.hpp"

namespace slitflow {

void WavePacketParams::validate() const {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
    throw InvalidArgument("sigma0 must be positive, got " + std::to_string(sigma0));
  }
  if (!(slit_offset > 0.0) || !std::isfinite(slit_offset)) {
    throw InvalidArgument("slit offset Y must be positive, got " + std::to_string(slit_offset));
  }
  if (!std::isfinite(kx)) throw InvalidArgument("kx must be finite");
  if (particles != 1 && particles != 2) {
    throw InvalidArgument("particles must be 1 or 2, got " + std::to_string(particles));
  }
  if (exchange_sign != 1 && exchange_sign != -1) {
    throw InvalidArgument("exchange_sign must be +1 or -1, got " + std::to_string(exchange_sign));
  }
}

UniformGrid::UniformGrid(int dim, double lo, double hi, std::size_t n)
    : dim_(dim), lo_(lo), hi_(hi), n_(n), delta_(0.0) {
  if (dim != 1 && dim != 2) throw InvalidArgument("grid dimension must be 1 or 2");
  if (!(hi > lo)) throw InvalidArgument("grid bounds must satisfy lo < hi");
  if (n < kMinPoints) {
    throw GridTooSmall("grid needs at least " + std::to_string(kMinPoints) +
                       " points per axis, got " + std::to_string(n));
  }
  delta_ = (hi - lo) / static_cast<double>(n - 1);
}

Coord UniformGrid::point(std::size_t flat) const noexcept {
  if (dim_ == 1) return {coordinate(flat), 0.0};
  return {coordinate(flat / n_), coordinate(flat % n_)};
}

bool UniformGrid::contains_strictly(const Coord& r) const noexcept {
  for (int a = 0; a < dim_; ++a) {
    if (!(r[a] > lo_ && r[a] < hi_)) return false;
  }
  return true;
}

ComplexField::ComplexField(UniformGrid g)
    : grid(g), re(g.size(), 0.0), im(g.size(), 0.0) {}

ComplexField::ComplexField(UniformGrid g, std::vector<double> real, std::vector<double> imag)
    : grid(g), re(std::move(real)), im(std::move(imag)) {
  if (re.size() != grid.size() || im.size() != grid.size()) {
    throw InvalidArgument("field arrays must hold exactly one value per grid point");
  }
}

namespace {

double trapezoid_weight(std::size_t i, std::size_t n) {
  return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

}  // namespace

double norm(const ComplexField& field) {
  const auto& g = field.grid;
  const std::size_t n = g.points_per_axis();
  const double d = g.spacing();
  double sum = 0.0;
  if (g.dim() == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      sum += trapezoid_weight(i, n) * probability_density(field, i);
    }
    return sum * d;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += trapezoid_weight(j, n) * probability_density(field, i * n + j);
    }
    sum += trapezoid_weight(i, n) * row;
  }
  return sum * d * d;
}

double probability_density(const ComplexField& field, std::size_t flat) {
  if (flat >= field.re.size()) throw InvalidArgument("grid index out of range");
  return field.re[flat] * field.re[flat] + field.im[flat] * field.im[flat];
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::exact:
      return "exact";
    case Provenance::fd:
      return "fd";
    case Provenance::hydro:
      return "hydro";
  }
  return "unknown";
}

}  // namespace slitflow
