#pragma once

#include <Eigen/Dense>

#include "modw/params.hpp"
#include "modw/spin.hpp"

namespace modw {

// Effective lin-angle-lin potential. With zeta = k z:
//   U_J(zeta)     = 2 u0 cos(theta_L) cos(2 zeta)
//   b_fict(zeta)  = -u0 sin(theta_L) sin(2 zeta)     (mu_B B_fict, along z)
//   b(zeta)       = (bx, 0, b_fict(zeta))
// Quantum:   V = U_J * I + (b_x F_x + b_fict F_z) / F
// Classical: U = U_J + n . b, with n the unit direction of F.

double scalar_potential(const LatticeParams& p, double zeta);
double scalar_potential_derivative(const LatticeParams& p, double zeta);

double fictitious_field(const LatticeParams& p, double zeta);
double fictitious_field_derivative(const LatticeParams& p, double zeta);

Eigen::Vector3d effective_field(const LatticeParams& p, double zeta);
Eigen::Vector3d effective_field_derivative(const LatticeParams& p, double zeta);

/// Polar angle of b(zeta) measured from +z, in [0, pi].
double field_polar_angle(const LatticeParams& p, double zeta);
/// d/dzeta of field_polar_angle.
double field_rotation_rate(const LatticeParams& p, double zeta);

Eigen::MatrixXcd potential_matrix(const LatticeParams& p, const SpinMatrices& spin, double zeta);

double classical_potential(const LatticeParams& p, double zeta, const Eigen::Vector3d& n);
/// -d/dzeta classical_potential at fixed n.
double classical_force(const LatticeParams& p, double zeta, const Eigen::Vector3d& n);

/// Precession vector Omega = b / F; the spin obeys dn/dtau = Omega x n, the same
/// rotation sense as <F> under V.
Eigen::Vector3d precession_field(const LatticeParams& p, double zeta);

/// Lowest adiabatic potential U_J - |b| (closed form).
double lowest_adiabatic_potential(const LatticeParams& p, double zeta);

/// For b_x = 0: U_J + n_z b_fict = amplitude * cos(2 zeta + phase).
struct PendulumForm {
  double amplitude = 0.0;  ///< C = u0 sqrt(4 cos^2 theta_L + n_z^2 sin^2 theta_L)
  double phase = 0.0;      ///< D = atan(n_z tan(theta_L) / 2)
};
PendulumForm pendulum_form(const LatticeParams& p, double n_z);

}  // namespace modw
