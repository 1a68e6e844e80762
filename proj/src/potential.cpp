#include "modw/potential.hpp"

#include <cmath>

namespace modw {

double scalar_potential(const LatticeParams& p, double zeta)
{
  return 2.0 * p.u0 * std::cos(p.theta_l) * std::cos(2.0 * zeta);
}

double scalar_potential_derivative(const LatticeParams& p, double zeta)
{
  return -4.0 * p.u0 * std::cos(p.theta_l) * std::sin(2.0 * zeta);
}

double fictitious_field(const LatticeParams& p, double zeta)
{
  return -p.u0 * std::sin(p.theta_l) * std::sin(2.0 * zeta);
}

double fictitious_field_derivative(const LatticeParams& p, double zeta)
{
  return -2.0 * p.u0 * std::sin(p.theta_l) * std::cos(2.0 * zeta);
}

Eigen::Vector3d effective_field(const LatticeParams& p, double zeta)
{
  return {p.bx, 0.0, fictitious_field(p, zeta)};
}

Eigen::Vector3d effective_field_derivative(const LatticeParams& p, double zeta)
{
  return {0.0, 0.0, fictitious_field_derivative(p, zeta)};
}

double field_polar_angle(const LatticeParams& p, double zeta)
{
  return std::atan2(p.bx, fictitious_field(p, zeta));
}

double field_rotation_rate(const LatticeParams& p, double zeta)
{
  const double bf = fictitious_field(p, zeta);
  const double b2 = p.bx * p.bx + bf * bf;
  if (b2 == 0.0) return 0.0;
  return -p.bx * fictitious_field_derivative(p, zeta) / b2;
}

Eigen::MatrixXcd potential_matrix(const LatticeParams& p, const SpinMatrices& spin, double zeta)
{
  const int d = spin.dim();
  Eigen::MatrixXcd v = scalar_potential(p, zeta) * Eigen::MatrixXcd::Identity(d, d);
  v += (p.bx / spin.f) * spin.fx + (fictitious_field(p, zeta) / spin.f) * spin.fz;
  return v;
}

double classical_potential(const LatticeParams& p, double zeta, const Eigen::Vector3d& n)
{
  return scalar_potential(p, zeta) + n.dot(effective_field(p, zeta));
}

double classical_force(const LatticeParams& p, double zeta, const Eigen::Vector3d& n)
{
  return -scalar_potential_derivative(p, zeta) - n.z() * fictitious_field_derivative(p, zeta);
}

Eigen::Vector3d precession_field(const LatticeParams& p, double zeta)
{
  return effective_field(p, zeta) / p.f_spin;
}

double lowest_adiabatic_potential(const LatticeParams& p, double zeta)
{
  return scalar_potential(p, zeta) - effective_field(p, zeta).norm();
}

PendulumForm pendulum_form(const LatticeParams& p, double n_z)
{
  // 2 u0 cos(t) cos(2z) - n_z u0 sin(t) sin(2z) = C cos(2z + D); the sign of cos(t)
  // is carried by C so that D stays in (-pi/2, pi/2).
  const double c = std::cos(p.theta_l);
  const double s = std::sin(p.theta_l);
  PendulumForm f;
  f.amplitude = p.u0 * std::sqrt(4.0 * c * c + n_z * n_z * s * s) * (c < 0.0 ? -1.0 : 1.0);
  f.phase = std::atan(n_z * std::tan(p.theta_l) / 2.0);
  return f;
}

}  // namespace modw
