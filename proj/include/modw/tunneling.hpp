#pragma once

#include <Eigen/Dense>

#include "modw/adiabatic.hpp"
#include "modw/wavefunction.hpp"

namespace modw {

/// Components psi_mu(zeta) = <mu(zeta)|psi(zeta)> and populations P_mu = |psi_mu|^2.
struct BandPopulations {
  Eigen::MatrixXcd components;  ///< N x dim
  Eigen::MatrixXd density;      ///< N x dim, P_mu(zeta_i) per unit length
  Eigen::VectorXd totals;       ///< integral of P_mu

  double total(int mu) const { return totals(mu); }
};

BandPopulations band_populations(const SpinorWavefunction& psi, const AdiabaticSpectrum& spectrum);

/// Inverse of band_populations: sum_mu psi_mu(zeta) |mu(zeta)>.
SpinorWavefunction from_band_components(const Eigen::MatrixXcd& components,
                                        const AdiabaticSpectrum& spectrum);

struct KineticDensity {
  PeriodicGrid grid;
  Eigen::VectorXd t_of_z;       ///< T(zeta) = sum_mu (<E> - V_mu) P_mu
  Eigen::MatrixXd populations;  ///< P_mu(zeta)
  double mean_energy = 0.0;
  double integral = 0.0;        ///< integral of T, equals <p^2>

  /// Longest contiguous run of grid points with T < 0: [first, last] indices, or {-1,-1}.
  std::pair<int, int> longest_negative_run() const;
  /// Contiguous run of T < 0 containing the grid point nearest `zeta`, or {-1,-1}.
  std::pair<int, int> negative_run_at(double zeta) const;
};

KineticDensity kinetic_energy_density(const SpinorWavefunction& psi,
                                      const AdiabaticSpectrum& spectrum, double mean_energy);

}  // namespace modw
