#pragma once

#include <vector>

#include <Eigen/Dense>

#include "modw/grid.hpp"
#include "modw/params.hpp"
#include "modw/spin.hpp"

namespace modw {

/// Position-resolved eigen-decomposition of the potential matrix.
///
/// Bands are sorted ascending at every grid point; band 0 is the lowest
/// adiabatic potential V_1. Eigenvectors are phase-continuous: the overlap of
/// each eigenvector with its neighbour at the previous grid point is real and
/// non-negative.
struct AdiabaticSpectrum {
  PeriodicGrid grid;
  Eigen::MatrixXd potentials;                 ///< grid.size() x dim, V_mu(zeta_i)
  std::vector<Eigen::MatrixXcd> eigenvectors; ///< per point, columns are bands

  int dim() const { return static_cast<int>(potentials.cols()); }
  Eigen::VectorXd band(int mu) const { return potentials.col(mu); }
  const Eigen::MatrixXcd& basis(int i) const { return eigenvectors[static_cast<std::size_t>(i)]; }
};

/// Throws NumericalError (naming zeta) if the eigensolver fails.
AdiabaticSpectrum adiabatic_spectrum(const LatticeParams& params, const SpinMatrices& spin,
                                     const PeriodicGrid& grid);

/// Scalar gauge potential Phi_mu = <d mu|d mu> - |<mu|d mu>|^2 (E_R units) by
/// eighth-order centered differences. Throws ResolutionError when neighbouring
/// eigenvectors overlap by less than `min_overlap`.
Eigen::VectorXd gauge_correction(const AdiabaticSpectrum& spectrum, int band,
                                 double min_overlap = 0.99);

/// Double-well landmarks of the lowest adiabatic potential on a single period.
struct DoubleWell {
  double left_min = 0.0;   ///< position of the left minimum
  double right_min = 0.0;  ///< position of the right minimum
  double barrier_pos = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;
  double barrier = 0.0;    ///< maximum of V_1 between the minima
  double curvature_left = 0.0;   ///< V_1'' at the left minimum
  double curvature_right = 0.0;
};

/// Locates the two wells of V_1 around zeta = 0 (closed form V_1 = U_J - |b|,
/// refined by golden-section search). Throws CalibrationError when V_1 has no
/// interior barrier, i.e. is not a double well.
DoubleWell analyze_double_well(const LatticeParams& params);

/// Global minimum over the domain of the adiabatic band `mu` (0-based) on a fine grid.
double band_minimum(const LatticeParams& params, int mu, int samples = 4096);

}  // namespace modw
