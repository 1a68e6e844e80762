#pragma once

#include <complex>

#include <Eigen/Dense>

#include "modw/evolution.hpp"
#include "modw/grid.hpp"
#include "modw/wavefunction.hpp"

namespace modw {

/// Reference harmonic frame for motional coherent states: oscillator
/// p^2 + (omega^2 / 4) (zeta - center)^2, so sigma_x^2 = 1/omega, sigma_p^2 = omega/4.
/// alpha = (zeta - center) / (2 sigma_x) + i p / (2 sigma_p).
class HarmonicFrame {
 public:
  HarmonicFrame() = default;
  HarmonicFrame(double center, double omega);
  static HarmonicFrame from_fit(const HarmonicFit& fit) { return {fit.center, fit.omega}; }

  double center() const { return center_; }
  double omega() const { return omega_; }
  double sigma_x() const;
  double sigma_p() const;

  cplx to_alpha(double zeta, double p) const;
  double zeta_of(cplx alpha) const;
  double p_of(cplx alpha) const;

 private:
  double center_ = 0.0;
  double omega_ = 1.0;
};

/// Joint motional x spin coherent-state label |alpha>|n(theta, phi)>.
struct CoherentLabel {
  cplx alpha{0.0, 0.0};
  double theta = 0.0;
  double phi = 0.0;

  Eigen::Vector3d direction() const;
};

/// D(alpha)|0> sampled on the grid (nearest periodic image). `mass_loss`, if given,
/// receives |1 - sum |phi|^2 dzeta|, the part of the Gaussian the grid misses.
Eigen::VectorXcd coherent_wavefunction(const PeriodicGrid& grid, const HarmonicFrame& frame,
                                       cplx alpha, double* mass_loss = nullptr);

/// Oscillator eigenfunction |n> of the frame on the grid.
Eigen::VectorXcd fock_wavefunction(const PeriodicGrid& grid, const HarmonicFrame& frame, int n);

/// Fock components <m|alpha>, m = 0..n_max.
Eigen::VectorXcd fock_coherent_vector(cplx alpha, int n_max);

/// |alpha> (x) |n> on the grid.
SpinorWavefunction coherent_product_state(const PeriodicGrid& grid, const HarmonicFrame& frame,
                                          int f_spin, const CoherentLabel& label);

/// Q of the product coherent state `centre` at `label`: exp(-|da|^2) ((1 + n.n0)/2)^{2F}.
double coherent_product_q(const CoherentLabel& centre, const CoherentLabel& label, int f_spin);

/// Husimi function Q(alpha, n) = |<alpha|<n|psi>|^2, a density with respect to
/// d^2alpha/pi x (2F+1)/(4 pi) dOmega. Precomputes per-state data for repeated use.
class HusimiQ {
 public:
  HusimiQ(const SpinorWavefunction& psi, const HarmonicFrame& frame);

  double operator()(const CoherentLabel& label) const;
  /// Same, with the phase-space point given as (zeta, p, theta, phi).
  double at(double zeta, double p, double theta, double phi) const;

  /// <alpha|<n|psi> for a pre-projected spin direction (see spin_projection()).
  cplx overlap(const Eigen::VectorXcd& spin_projected, cplx alpha) const;
  /// sum_m <n|m> psi_m(zeta_i) for direction (theta, phi).
  Eigen::VectorXcd spin_projection(double theta, double phi) const;

  const HarmonicFrame& frame() const { return frame_; }
  int spin() const { return f_; }

 private:
  const SpinorWavefunction* psi_;
  HarmonicFrame frame_;
  int f_;
};

double q_value(const SpinorWavefunction& psi, const HarmonicFrame& frame, const CoherentLabel& label);

}  // namespace modw
