#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modw/grid.hpp"
#include "modw/params.hpp"

namespace modw {

enum class LevelSource { kExact, kBornOppenheimer, kBornOppenheimerGauge, kCustom };
std::string to_string(LevelSource source);

struct EnergyLevels {
  std::vector<double> values;  ///< ascending, E_R
  LevelSource source = LevelSource::kExact;
  int basis_size = 0;          ///< basis size of the reported (finer) solve
  double convergence = 0.0;    ///< max |change| of reported levels under basis doubling

  double splitting(int i = 0) const { return values.at(i + 1) - values.at(i); }
};

/// Dense diagonalization of p^2 + V(zeta) in a plane-wave x spin basis with
/// `n_basis` plane waves; the lowest `count` levels are compared against a solve
/// with 2 * n_basis waves and ResolutionError is thrown if any differs by more
/// than `tolerance`.
EnergyLevels full_hamiltonian_levels(const LatticeParams& params, int n_basis, int count = 8,
                                     double tolerance = 1e-8);

/// Lowest `count` eigenvalues of p^2 + potential on a periodic Fourier grid.
std::vector<double> fourier_grid_levels(const PeriodicGrid& grid, const Eigen::VectorXd& potential,
                                        int count);

/// One-band Born-Oppenheimer levels on V_mu (+ Phi_mu when with_gauge), Fourier-grid
/// Hamiltonian with `grid_n` points, converged under grid doubling.
EnergyLevels bo_levels(const LatticeParams& params, int band, bool with_gauge, int grid_n = 256,
                       int count = 8, double tolerance = 1e-8);

}  // namespace modw
