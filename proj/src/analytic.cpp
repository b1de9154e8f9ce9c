#include "slitflow/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "slitflow/error.hpp"

namespace slitflow {

namespace {

double slit_center(const WavePacketParams& params, SlitLabel slit) {
  return slit == SlitLabel::A ? params.slit_offset : -params.slit_offset;
}

// (2 pi sigma_t^2)^(-1/4). arg(sigma_t) lies in [0, pi/2) for t >= 0, so the
// principal branch is continuous in t.
Complex packet_prefactor(const WavePacketParams& params, double t) {
  const Complex st = sigma_t(params, t);
  return std::pow(2.0 * std::numbers::pi * st * st, -0.25);
}

}  // namespace

Complex sigma_t(const WavePacketParams& params, double t) {
  const double s0 = params.sigma0;
  return s0 * Complex(1.0, t / (2.0 * s0 * s0));
}

Complex psi_slit(const WavePacketParams& params, SlitLabel slit, double y, double t) {
  const double z = y - slit_center(params, slit);
  const Complex st = sigma_t(params, t);
  return packet_prefactor(params, t) * std::exp(-z * z / (4.0 * params.sigma0 * st));
}

double normalization_one(const WavePacketParams& params) {
  const double s0 = params.sigma0;
  const double y = params.slit_offset;
  const double overlap = std::exp(-y * y / (2.0 * s0 * s0));
  return 1.0 / std::sqrt(2.0 + 2.0 * overlap);
}

double normalization_two(const WavePacketParams& params) {
  const double s0 = params.sigma0;
  const double y = params.slit_offset;
  const double overlap_sq = std::exp(-y * y / (s0 * s0));
  return 1.0 / std::sqrt(2.0 + 2.0 * params.exchange_sign * overlap_sq);
}

Complex psi_one(const WavePacketParams& params, double y, double t) {
  return normalization_one(params) *
         (psi_slit(params, SlitLabel::A, y, t) + psi_slit(params, SlitLabel::B, y, t));
}

Complex psi_two(const WavePacketParams& params, double y1, double y2, double t) {
  const Complex a1 = psi_slit(params, SlitLabel::A, y1, t);
  const Complex b1 = psi_slit(params, SlitLabel::B, y1, t);
  const Complex a2 = psi_slit(params, SlitLabel::A, y2, t);
  const Complex b2 = psi_slit(params, SlitLabel::B, y2, t);
  const double s = params.exchange_sign;
  return normalization_two(params) * (a1 * b2 + s * (b1 * a2));
}

double x_trajectory(const WavePacketParams& params, double x0, double t) {
  return x0 + params.kx * t;
}

ExactField::ExactField(const WavePacketParams& params, FieldKind kind)
    : params_(params), kind_(kind), norm_(1.0) {
  params_.validate();
  switch (kind_) {
    case FieldKind::one_particle:
      norm_ = normalization_one(params_);
      break;
    case FieldKind::two_particle:
      norm_ = normalization_two(params_);
      break;
    case FieldKind::single_slit:
      norm_ = 1.0;
      break;
  }
}

ExactField ExactField::interference(const WavePacketParams& params) {
  return ExactField(params, params.particles == 2 ? FieldKind::two_particle
                                                  : FieldKind::one_particle);
}

ExactField::Jet ExactField::slit_jet(SlitLabel slit, double y, double t) const {
  const double z = y - slit_center(params_, slit);
  const Complex c = 1.0 / (4.0 * params_.sigma0 * sigma_t(params_, t));
  const Complex value = packet_prefactor(params_, t) * std::exp(-c * z * z);
  const Complex d1 = -2.0 * c * z * value;
  const Complex d2 = (4.0 * c * c * z * z - 2.0 * c) * value;
  return {value, d1, d2};
}

Complex ExactField::psi(const Coord& r, double t) const {
  switch (kind_) {
    case FieldKind::single_slit:
      return psi_slit(params_, SlitLabel::A, r[0], t);
    case FieldKind::one_particle:
      return psi_one(params_, r[0], t);
    case FieldKind::two_particle:
      return psi_two(params_, r[0], r[1], t);
  }
  return {};
}

std::array<Complex, 2> ExactField::gradient(const Coord& r, double t) const {
  if (kind_ == FieldKind::single_slit) {
    return {slit_jet(SlitLabel::A, r[0], t).d1, 0.0};
  }
  if (kind_ == FieldKind::one_particle) {
    const Jet a = slit_jet(SlitLabel::A, r[0], t);
    const Jet b = slit_jet(SlitLabel::B, r[0], t);
    return {norm_ * (a.d1 + b.d1), 0.0};
  }
  const Jet a1 = slit_jet(SlitLabel::A, r[0], t);
  const Jet b1 = slit_jet(SlitLabel::B, r[0], t);
  const Jet a2 = slit_jet(SlitLabel::A, r[1], t);
  const Jet b2 = slit_jet(SlitLabel::B, r[1], t);
  const double s = params_.exchange_sign;
  return {norm_ * (a1.d1 * b2.value + s * (b1.d1 * a2.value)),
          norm_ * (a1.value * b2.d1 + s * (b1.value * a2.d1))};
}

Complex ExactField::laplacian(const Coord& r, double t) const {
  if (kind_ == FieldKind::single_slit) return slit_jet(SlitLabel::A, r[0], t).d2;
  if (kind_ == FieldKind::one_particle) {
    return norm_ * (slit_jet(SlitLabel::A, r[0], t).d2 + slit_jet(SlitLabel::B, r[0], t).d2);
  }
  const Jet a1 = slit_jet(SlitLabel::A, r[0], t);
  const Jet b1 = slit_jet(SlitLabel::B, r[0], t);
  const Jet a2 = slit_jet(SlitLabel::A, r[1], t);
  const Jet b2 = slit_jet(SlitLabel::B, r[1], t);
  const double s = params_.exchange_sign;
  return norm_ * ((a1.d2 * b2.value + a1.value * b2.d2) +
                  s * (b1.d2 * a2.value + b1.value * a2.d2));
}

double ExactField::peak_density(double t) const {
  const double single = 1.0 / std::sqrt(2.0 * std::numbers::pi * std::norm(sigma_t(params_, t)));
  switch (kind_) {
    case FieldKind::single_slit:
      return single;
    case FieldKind::one_particle:
      return 4.0 * norm_ * norm_ * single;
    case FieldKind::two_particle:
      return 4.0 * norm_ * norm_ * single * single;
  }
  return single;
}

bool ExactField::near_node(const Coord& r, double t) const {
  return std::norm(psi(r, t)) < kNodeEpsilon * peak_density(t);
}

namespace {

struct LogDerivatives {
  std::array<Complex, 2> u;  // grad psi / psi
  Complex lap_log;           // lap ln psi
};

LogDerivatives log_derivatives(const ExactField& field, const Coord& r, double t,
                               double node_epsilon) {
  const Complex value = field.psi(r, t);
  const double density = std::norm(value);
  if (!(density > 0.0) || density < node_epsilon * field.peak_density(t)) {
    throw NodeError("density vanishes at y = " + std::to_string(r[0]) +
                    (field.dim() == 2 ? ", " + std::to_string(r[1]) : std::string()) +
                    ", t = " + std::to_string(t));
  }
  const auto grad = field.gradient(r, t);
  LogDerivatives out{};
  Complex uu = 0.0;
  for (int a = 0; a < field.dim(); ++a) {
    out.u[a] = grad[a] / value;
    uu += out.u[a] * out.u[a];
  }
  out.lap_log = field.laplacian(r, t) / value - uu;
  return out;
}

}  // namespace

Coord exact_velocity(const ExactField& field, const Coord& r, double t, double node_epsilon) {
  const auto d = log_derivatives(field, r, t, node_epsilon);
  return {d.u[0].imag(), d.u[1].imag()};
}

Coord exact_log_amplitude_gradient(const ExactField& field, const Coord& r, double t,
                                   double node_epsilon) {
  const auto d = log_derivatives(field, r, t, node_epsilon);
  return {d.u[0].real(), d.u[1].real()};
}

double exact_quantum_potential(const ExactField& field, const Coord& r, double t,
                               double node_epsilon) {
  const auto d = log_derivatives(field, r, t, node_epsilon);
  double grad_sq = 0.0;
  for (int a = 0; a < field.dim(); ++a) grad_sq += d.u[a].real() * d.u[a].real();
  return -0.5 * (grad_sq + d.lap_log.real());
}

double exact_velocity_divergence(const ExactField& field, const Coord& r, double t,
                                 double node_epsilon) {
  return log_derivatives(field, r, t, node_epsilon).lap_log.imag();
}

Trajectory exact_trajectory(const ExactField& field, const Coord& start,
                            std::span<const double> t_grid) {
  Trajectory traj;
  traj.dim = field.dim();
  traj.provenance = Provenance::exact;
  if (t_grid.empty()) return traj;
  const int dim = field.dim();
  auto axpy = [dim](const Coord& r, double h, const Coord& v) {
    Coord out = r;
    for (int a = 0; a < dim; ++a) out[a] += h * v[a];
    return out;
  };

  Coord r = start;
  traj.times.push_back(t_grid[0]);
  traj.positions.push_back(r);
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double t = t_grid[k - 1];
    const double h = t_grid[k] - t;
    if (!(h > 0.0)) throw InvalidArgument("trajectory time lattice must be strictly increasing");
    const Coord k1 = exact_velocity(field, r, t);
    const Coord k2 = exact_velocity(field, axpy(r, 0.5 * h, k1), t + 0.5 * h);
    const Coord k3 = exact_velocity(field, axpy(r, 0.5 * h, k2), t + 0.5 * h);
    const Coord k4 = exact_velocity(field, axpy(r, h, k3), t + h);
    for (int a = 0; a < dim; ++a) {
      r[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
    }
    traj.times.push_back(t_grid[k]);
    traj.positions.push_back(r);
  }
  return traj;
}

ComplexField sample_field(const ExactField& field, const UniformGrid& grid, double t) {
  if (grid.dim() != field.dim()) {
    throw InvalidArgument("grid dimension does not match the exact field");
  }
  ComplexField out(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Complex v = field.psi(grid.point(k), t);
    out.re[k] = v.real();
    out.im[k] = v.imag();
  }
  return out;
}

}  // namespace slitflow
