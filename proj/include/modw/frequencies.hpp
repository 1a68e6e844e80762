#pragma once

#include <optional>
#include <vector>

#include "modw/params.hpp"

namespace modw {

struct FrequencyPair {
  double omega1 = 0.0;  ///< centre-of-mass oscillation [rad / tau]
  double omega2 = 0.0;  ///< spin precession [rad / tau]
  double ratio() const { return omega2 / omega1; }
};

/// Pendulum (b_x = 0) action-angle data at fixed n_z.
struct PendulumFrequencies {
  FrequencyPair freq;
  double action = 0.0;     ///< J = (1/2pi) closed-orbit integral of p dzeta
  double modulus = 0.0;    ///< kappa, 2 kappa^2 = 1 + H0/|C| (energy measured from the pendulum axis)
  double omega0 = 0.0;     ///< small-oscillation frequency sqrt(8 |C|)
};

/// Exact libration frequency from the complete elliptic integral and the
/// pendulum action; omega2 = dH0/dI_spin at fixed J (I_spin = F n_z) by centered
/// differences. Throws DomainError outside libration (kappa >= 1) or when b_x != 0.
PendulumFrequencies pendulum_action_angle(const LatticeParams& params, double n_z, double energy);

/// Pendulum action J(E) for amplitude |C| (energy measured with the same origin as H0).
double pendulum_action(double abs_c, double energy);

/// Adiabatic surface V_alpha(zeta) = U_J - |b| cos(alpha); alpha = 0 is the lowest
/// adiabatic potential.
double adiabatic_surface(const LatticeParams& params, double alpha, double zeta);

/// Bounded orbit on the alpha surface at `energy` containing `zeta_start`.
struct SurfaceOrbit {
  double left = 0.0;
  double right = 0.0;
  double period = 0.0;
  FrequencyPair freq;
  bool spans_barrier = false;  ///< orbit encloses zeta = 0
};

/// omega1 = 2 pi / period from turning-point quadrature; omega2 = time average of
/// |b| / F over the orbit. Throws DomainError if no bounded orbit contains zeta_start.
SurfaceOrbit adiabatic_orbit(const LatticeParams& params, double alpha, double energy,
                             double zeta_start);
FrequencyPair adiabatic_frequencies(const LatticeParams& params, double alpha, double energy,
                                    double zeta_start);

struct ResonanceHit {
  double coordinate = 0.0;  ///< alpha, n_z or energy depending on the scan
  double ratio = 0.0;       ///< the rational ratio matched
  bool spans_barrier = false;
};

/// Bisection on omega2/omega1 - r along alpha in [alpha_lo, alpha_hi] at fixed energy,
/// separately within each orbit family (single-well vs. barrier-spanning).
std::vector<ResonanceHit> resonance_scan_alpha(const LatticeParams& params, double energy,
                                               double alpha_lo, double alpha_hi,
                                               const std::vector<double>& ratios,
                                               double zeta_start, int samples = 400);

/// Same on the integrable (b_x = 0) pendulum, scanning n_z at fixed energy.
std::vector<ResonanceHit> resonance_scan_nz(const LatticeParams& params, double energy,
                                            double nz_lo, double nz_hi,
                                            const std::vector<double>& ratios, int samples = 200);

/// Upper bound ln(I/hbar) / lambda on the quantum-classical break time, seconds.
/// Throws DomainError unless action_ratio > 1 and lambda > 0.
double break_time(double lambda_per_second, double action_ratio);

}  // namespace modw
