#pragma once

// Closed-form free-space solutions for the two-slit setup. Only the
// transverse (y) dependence is evaluated; the plane-wave factor along x
// contributes the trivial trajectory x(t) = x0 + kx t.

#include <array>
#include <span>

#include "slitflow/core.hpp"

namespace slitflow {

enum class SlitLabel { A, B };

/// Density threshold, relative to the peak density, below which velocity and
/// quantum potential are treated as undefined.
inline constexpr double kNodeEpsilon = 1e-12;

/// Complex width sigma0 (1 + i t / (2 sigma0^2)).
Complex sigma_t(const WavePacketParams& params, double t);

/// Transverse factor of the packet emerging from one slit. Slit A is centred
/// on +Y, slit B on -Y.
Complex psi_slit(const WavePacketParams& params, SlitLabel slit, double y, double t);

/// Normalization of the one-particle superposition, from the closed-form
/// overlap of the two packets at t = 0.
double normalization_one(const WavePacketParams& params);
/// Normalization of the (anti)symmetrized two-particle state.
double normalization_two(const WavePacketParams& params);

Complex psi_one(const WavePacketParams& params, double y, double t);
Complex psi_two(const WavePacketParams& params, double y1, double y2, double t);

/// x(t) = x0 + kx t.
double x_trajectory(const WavePacketParams& params, double x0, double t);

/// Which exact state an ExactField represents. `single_slit` is the lone
/// slit-A packet with no interference, used as a node-free control.
enum class FieldKind { one_particle, two_particle, single_slit };

/// Closed-form wave function with its spatial derivatives.
class ExactField {
 public:
  ExactField(const WavePacketParams& params, FieldKind kind);

  /// one_particle or two_particle, chosen from params.particles.
  static ExactField interference(const WavePacketParams& params);

  const WavePacketParams& params() const noexcept { return params_; }
  FieldKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return kind_ == FieldKind::two_particle ? 2 : 1; }
  double normalization() const noexcept { return norm_; }

  Complex psi(const Coord& r, double t) const;
  std::array<Complex, 2> gradient(const Coord& r, double t) const;
  Complex laplacian(const Coord& r, double t) const;

  /// Upper bound on max |psi|^2 at time t from the triangle inequality. Used
  /// as the reference density for node detection.
  double peak_density(double t) const;
  bool near_node(const Coord& r, double t) const;

 private:
  struct Jet {
    Complex value;
    Complex d1;
    Complex d2;
  };
  Jet slit_jet(SlitLabel slit, double y, double t) const;

  WavePacketParams params_;
  FieldKind kind_;
  double norm_;
};

// The pointwise quantities below throw NodeError where
// |psi|^2 < node_epsilon * peak_density(t). Passing node_epsilon = 0 only
// rejects points where psi is exactly zero, which is what tail evaluations
// far from any node need.

/// Im(psi* grad psi) / |psi|^2.
Coord exact_velocity(const ExactField& field, const Coord& r, double t,
                     double node_epsilon = kNodeEpsilon);

/// Q = -(1/2) [ (grad g)^2 + lap g ], g = ln|psi|.
double exact_quantum_potential(const ExactField& field, const Coord& r, double t,
                               double node_epsilon = kNodeEpsilon);

/// grad g with g = ln|psi|.
Coord exact_log_amplitude_gradient(const ExactField& field, const Coord& r, double t,
                                   double node_epsilon = kNodeEpsilon);

/// div v = lap S.
double exact_velocity_divergence(const ExactField& field, const Coord& r, double t,
                                 double node_epsilon = kNodeEpsilon);

/// Classical RK4 on dr/dt = exact_velocity over the given (increasing) time
/// lattice. Positions are recorded at every lattice time.
Trajectory exact_trajectory(const ExactField& field, const Coord& start,
                            std::span<const double> t_grid);

/// Evaluates psi at every grid point.
ComplexField sample_field(const ExactField& field, const UniformGrid& grid, double t);

}  // namespace slitflow
