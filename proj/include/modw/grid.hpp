#pragma once

#include <Eigen/Dense>

#include "modw/params.hpp"

namespace modw {

/// N equally spaced points on the periodic interval [-L/2, L/2).
class PeriodicGrid {
 public:
  PeriodicGrid() = default;
  PeriodicGrid(int n, double length);

  /// Grid spanning the lattice domain of `params` (length n_periods * pi).
  static PeriodicGrid for_lattice(const LatticeParams& params, int n);

  int size() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  double start() const { return -0.5 * length_; }
  double x(int i) const { return start() + i * spacing(); }
  Eigen::VectorXd points() const;

  /// Angular wavenumbers in FFT order (k_j = 2 pi j / L, j = 0..N/2-1, -N/2..-1).
  Eigen::VectorXd wavenumbers() const;

  /// Wraps a displacement into [-L/2, L/2).
  double wrap_displacement(double dx) const;

  int wrap_index(int i) const { return ((i % n_) + n_) % n_; }

 private:
  int n_ = 0;
  double length_ = 0.0;
};

}  // namespace modw
