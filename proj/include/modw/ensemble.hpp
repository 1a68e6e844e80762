#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "modw/classical.hpp"
#include "modw/coherent.hpp"

namespace modw {

/// Weighted sample of phase-space points (zeta, p, n). Metropolis ensembles carry
/// uniform weights; quadrature ensembles carry Q times the quadrature weight.
struct Ensemble {
  std::vector<ClassicalState> samples;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  int burn_in = 0;
  int thinning = 1;
  double acceptance = 0.0;

  std::size_t size() const { return samples.size(); }
  double total_weight() const;
  /// (sum w)^2 / sum w^2.
  double effective_size() const;
};

/// Density on (zeta, p, cos theta, phi) coordinates, up to normalization.
using PhaseSpaceDensity = std::function<double(const ClassicalState&)>;

struct MetropolisOptions {
  int count = 10000;
  std::uint64_t seed = 1;
  /// Random-walk widths in (zeta, p, cos theta, phi); zero entries are chosen
  /// from the frame (2 sigma_x, 2 sigma_p) and (0.5, 1.0).
  std::array<double, 4> widths{0.0, 0.0, 0.0, 0.0};
  int burn_in = 10000;
  int pilot = 20000;        ///< steps used to choose the thinning interval
  double max_lag1 = 0.1;    ///< target lag-1 autocorrelation of n_z after thinning
  int max_thinning = 200;
  double min_acceptance = 0.1;
  double max_acceptance = 0.6;
  double zeta_period = 0.0;  ///< wrap zeta into [-period/2, period/2) when positive
};

/// Random-walk Metropolis targeting `density`, started at `start`. Throws TuningError
/// with suggested widths if the acceptance rate leaves [min, max].
Ensemble metropolis_sample(const PhaseSpaceDensity& density, const ClassicalState& start,
                           const HarmonicFrame& frame, const MetropolisOptions& options);

/// Metropolis sample of the Husimi function of `psi`.
Ensemble metropolis_sample(const SpinorWavefunction& psi, const HarmonicFrame& frame,
                           const MetropolisOptions& options);

/// Lag-k autocorrelation of a series.
double autocorrelation(const std::vector<double>& x, int lag);

/// Tensor quadrature of the phase space: uniform points in zeta (periodic trapezoid
/// over [zeta_lo, zeta_hi)), uniform in p around p_center, Gauss-Legendre in
/// cos theta, uniform in phi. Weights carry dzeta dp / (2 pi) (2F+1)/(4 pi) dOmega.
struct QuadratureSpec {
  int n_zeta = 32;
  double zeta_lo = 0.0;
  double zeta_hi = 0.0;  ///< equal to zeta_lo: the lattice domain of the state
  int n_p = 24;
  double p_center = 0.0;
  double p_half_width = 0.0;  ///< zero: 6 sigma_p of the frame
  int n_cos = 8;
  int n_phi = 18;
  double prune = 1e-8;  ///< drop points with Q below prune * max Q
};

using CoherentDensity = std::function<double(const CoherentLabel&)>;

/// Weighted points with weights Q(label) times the quadrature weight of the measure.
Ensemble quadrature_ensemble(const CoherentDensity& q, const HarmonicFrame& frame, int f_spin,
                             const QuadratureSpec& spec);
Ensemble quadrature_ensemble(const SpinorWavefunction& psi, const HarmonicFrame& frame,
                             QuadratureSpec spec);

/// Transports every sample along the classical flow for time tau; weights unchanged.
Ensemble propagate_ensemble(const LatticeParams& params, const Ensemble& ensemble, double tau,
                            const IntegratorOptions& options = {});

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// <F_z> = sign * (F + 1) * E_Q[n_z] with Monte Carlo standard error.
Estimate mean_fz_classical(const Ensemble& ensemble, int f_spin, double sign = 1.0);

/// Sign s in {+1, -1} making (F + 1) E_Q[n_z] agree with the quantum <F_z> at t = 0.
double magnetization_sign(const Ensemble& ensemble, int f_spin, double quantum_fz);

/// Histogram density of zeta on the bins centred at grid points (periodic), normalized
/// to unit integral.
Eigen::VectorXd reduced_position_density(const Ensemble& ensemble, const PeriodicGrid& grid);

/// Position marginal of the Husimi function: |psi|^2 convolved with |phi_0|^2.
Eigen::VectorXd q_position_marginal(const SpinorWavefunction& psi, const HarmonicFrame& frame);

/// Integral of a density over zeta < 0.
double left_mass(const Eigen::VectorXd& density, const PeriodicGrid& grid);

}  // namespace modw
