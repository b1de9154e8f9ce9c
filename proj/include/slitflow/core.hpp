#pragma once

// Shared value types: packet parameters, uniform grids, sampled wave
// functions and trajectories. All quantities are dimensionless with
// hbar = m = 1.

#include <array>
#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace slitflow {

using Complex = std::complex<double>;

/// Point in configuration space. One-particle runs use only component 0;
/// two-particle runs use (y1, y2).
using Coord = std::array<double, 2>;

/// Slit geometry and transverse packet shape.
struct WavePacketParams {
  double slit_offset = 1.0;  ///< half-separation Y of the slits
  double sigma0 = 0.2;       ///< initial packet width
  double kx = 0.1;           ///< longitudinal wave number
  int particles = 1;         ///< 1 or 2
  int exchange_sign = 1;     ///< +1 bosons, -1 fermions (two particles only)

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

/// Square uniform grid in 1 or 2 dimensions. Both axes share lo, hi and the
/// point count, so the spacing is identical on each axis. In 2D the storage
/// is row-major with y1 as the slow axis: flat = i1 * n + i2.
class UniformGrid {
 public:
  static constexpr std::size_t kMinPoints = 11;

  UniformGrid(int dim, double lo, double hi, std::size_t n);

  int dim() const noexcept { return dim_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t points_per_axis() const noexcept { return n_; }
  double spacing() const noexcept { return delta_; }
  std::size_t size() const noexcept { return dim_ == 1 ? n_ : n_ * n_; }

  /// Coordinate of index i along any axis.
  double coordinate(std::size_t i) const noexcept { return lo_ + static_cast<double>(i) * delta_; }
  Coord point(std::size_t flat) const noexcept;
  std::size_t flat_index(std::size_t i1, std::size_t i2 = 0) const noexcept {
    return dim_ == 1 ? i1 : i1 * n_ + i2;
  }
  bool contains_strictly(const Coord& r) const noexcept;

  friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

 private:
  int dim_;
  double lo_;
  double hi_;
  std::size_t n_;
  double delta_;
};

/// psi = re + i*im sampled on a uniform grid.
struct ComplexField {
  explicit ComplexField(UniformGrid g);
  ComplexField(UniformGrid g, std::vector<double> real, std::vector<double> imag);

  UniformGrid grid;
  std::vector<double> re;
  std::vector<double> im;

  Complex value(std::size_t flat) const noexcept { return {re[flat], im[flat]}; }
};

/// Trapezoidal approximation of the integral of |psi|^2 (iterated in 2D).
double norm(const ComplexField& field);

/// |psi|^2 at one grid point.
double probability_density(const ComplexField& field, std::size_t flat);

enum class Provenance { exact, fd, hydro };

std::string_view to_string(Provenance p);

/// Time-stamped Bohmian path in configuration space.
struct Trajectory {
  int dim = 1;
  Provenance provenance = Provenance::exact;
  std::vector<double> times;
  std::vector<Coord> positions;
};

}  // namespace slitflow
