#pragma once

#include <Eigen/Dense>

namespace modw {

/// Angular momentum operators for spin F in the |F, m> basis, m = -F..F ascending.
struct SpinMatrices {
  int f = 0;
  Eigen::MatrixXcd fx;
  Eigen::MatrixXcd fy;
  Eigen::MatrixXcd fz;

  int dim() const { return 2 * f + 1; }
  /// Basis index of magnetic quantum number m.
  int index(int m) const { return m + f; }
};

/// Ladder-operator construction. Throws ConfigError for f_spin < 1.
SpinMatrices build_spin_matrices(int f_spin);

/// Wigner small-d matrix d(beta) = exp(-i beta F_y), real, indexed like SpinMatrices.
Eigen::MatrixXd wigner_small_d(int f_spin, double beta);

/// exp(-i angle (a . F)) for a unit axis in the x-z plane at polar angle `axis_polar`.
Eigen::MatrixXcd spin_rotation_xz(int f_spin, double axis_polar, double angle);

/// Spin coherent state exp(-i phi F_z) exp(-i theta F_y) |F, m=+F>, pointing along n(theta, phi).
Eigen::VectorXcd spin_coherent_state(int f_spin, double theta, double phi);

}  // namespace modw
