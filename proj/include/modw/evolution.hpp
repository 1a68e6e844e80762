#pragma once

#include <vector>

#include <Eigen/Dense>

#include "modw/adiabatic.hpp"
#include "modw/params.hpp"
#include "modw/spin.hpp"
#include "modw/wavefunction.hpp"

namespace modw {

struct Observables {
  double norm = 0.0;
  double energy = 0.0;     ///< <H>
  double kinetic = 0.0;    ///< <p^2>
  double potential = 0.0;  ///< <V>
  double fz = 0.0;         ///< <F_z>
  double zeta_mean = 0.0;  ///< <zeta> on [-L/2, L/2)
};

/// H = p^2 + V(zeta) on a periodic grid: kinetic part by FFT, potential pointwise.
class SpinorHamiltonian {
 public:
  SpinorHamiltonian(const LatticeParams& params, const PeriodicGrid& grid);

  /// Expectation values; the kinetic part is evaluated in momentum space.
  Observables expectation(const SpinorWavefunction& psi) const;
  /// H psi.
  SpinorWavefunction apply(const SpinorWavefunction& psi) const;

  const LatticeParams& params() const { return params_; }
  const PeriodicGrid& grid() const { return grid_; }
  const SpinMatrices& spin() const { return spin_; }
  const Eigen::MatrixXcd& potential_at(int i) const { return potential_[static_cast<std::size_t>(i)]; }
  const ColumnFft& fft() const { return fft_; }

 private:
  LatticeParams params_;
  PeriodicGrid grid_;
  SpinMatrices spin_;
  std::vector<Eigen::MatrixXcd> potential_;
  Eigen::VectorXd k2_;
  ColumnFft fft_;
};

/// Second-order split-operator step: kinetic half step in momentum space,
/// exp(-i V dtau) pointwise (scalar phase times a spin rotation about b(zeta)),
/// kinetic half step.
class QuantumPropagator {
 public:
  QuantumPropagator(const LatticeParams& params, const PeriodicGrid& grid, double dtau);

  void step(SpinorWavefunction& psi) const;
  void advance(SpinorWavefunction& psi, long steps) const;

  double dtau() const { return dtau_; }
  const SpinorHamiltonian& hamiltonian() const { return hamiltonian_; }

 private:
  SpinorHamiltonian hamiltonian_;
  double dtau_;
  std::vector<Eigen::MatrixXcd> potential_step_;
  Eigen::VectorXcd kinetic_half_;
};

struct EvolveOptions {
  double dtau = 2e-5;
  int record_every = 50;              ///< steps between time-series samples
  std::vector<double> snapshot_times; ///< states to keep (rounded to the step grid)
  double norm_tolerance = 1e-8;       ///< IntegrationError beyond this drift
  double energy_tolerance = 0.0;      ///< relative <H> drift; <= 0 disables
};

struct QuantumTrajectory {
  std::vector<double> times;
  std::vector<double> fz;
  std::vector<double> energy;
  std::vector<double> norm;
  std::vector<double> snapshot_times;
  std::vector<SpinorWavefunction> snapshots;

  double max_norm_drift() const;
  double max_relative_energy_drift() const;
};

QuantumTrajectory evolve(const LatticeParams& params, const SpinorWavefunction& psi,
                         double tau_span, const EvolveOptions& options = {});

Observables observables(const LatticeParams& params, const SpinorWavefunction& psi);

enum class Well { kLeft, kRight };

/// Harmonic reference frame: centre and oscillator frequency of p^2 + K/2 (zeta - c)^2.
struct HarmonicFit {
  double center = 0.0;
  double omega = 0.0;      ///< sqrt(2 K)
  double curvature = 0.0;  ///< K
};

struct InitialState {
  SpinorWavefunction psi;
  HarmonicFit fit;
  double energy = 0.0;   ///< <H>
  double barrier = 0.0;  ///< V_1 barrier between the wells
  double min_v2 = 0.0;   ///< global minimum of V_2
};

/// Harmonic-oscillator ground state of the chosen well of V_1 times the local lowest
/// adiabatic spinor. Throws CalibrationError unless barrier < <H> < min V_2.
InitialState initial_state(const LatticeParams& params, const PeriodicGrid& grid, Well side);

HarmonicFit harmonic_fit(const LatticeParams& params, Well side);

/// First zero crossing of <F_z> (linear interpolation); the moment of an even
/// two-well superposition. Returns a negative value if <F_z> never changes sign.
double cat_time(const QuantumTrajectory& trajectory);

}  // namespace modw
