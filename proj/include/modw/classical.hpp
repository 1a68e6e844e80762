#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "modw/params.hpp"

namespace modw {

/// Point on the 4D phase space: position zeta, momentum p, spin direction n.
struct ClassicalState {
  double zeta = 0.0;
  double p = 0.0;
  Eigen::Vector3d n = Eigen::Vector3d::UnitZ();

  static ClassicalState from_angles(double zeta, double p, double theta, double phi);
  double theta() const;
  double phi() const;  ///< in [0, 2 pi)
};

double classical_energy(const LatticeParams& params, const ClassicalState& s);

/// Order of the symmetric composition built on the second-order splitting step.
enum class SplittingOrder { kSecond = 2, kFourth = 4, kSixth = 6, kEighth = 8 };

struct IntegratorOptions {
  double dtau = 1e-3;
  SplittingOrder order = SplittingOrder::kSixth;
  double energy_tolerance = 1e-8;  ///< relative; <= 0 disables the check
  int record_every = 1;            ///< store every k-th step in a Trajectory
};

/// Splitting integrator for H = p^2 + U_J(zeta) + n . b(zeta).
///
/// The base step is drift(h/2) . potential(h) . drift(h/2) where the potential
/// flow is solved exactly at frozen zeta: n rotates about b(zeta) by |b| h / F
/// (Rodrigues) and p receives the time-integrated force along that rotation.
/// |n| is preserved to rounding and the step is symplectic and time-reversible.
class ClassicalIntegrator {
 public:
  explicit ClassicalIntegrator(const LatticeParams& params,
                               SplittingOrder order = SplittingOrder::kEighth);

  /// One composed step of size h (h may be negative).
  void step(ClassicalState& s, double h) const;
  /// Single second-order step.
  void base_step(ClassicalState& s, double h) const;
  /// Advances by `tau` using steps no larger than `dtau`.
  void advance(ClassicalState& s, double tau, double dtau) const;

  const LatticeParams& params() const { return params_; }

 private:
  void potential_flow(ClassicalState& s, double h) const;

  LatticeParams params_;
  std::vector<double> weights_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ClassicalState> states;
  std::vector<double> energies;

  double max_relative_energy_drift() const;
};

/// Integrates from `initial` over [0, tau_span]. Throws IntegrationError when the
/// relative energy drift exceeds options.energy_tolerance.
Trajectory integrate(const LatticeParams& params, const ClassicalState& initial,
                     double tau_span, const IntegratorOptions& options = {});

/// Flow-map Jacobian in canonical coordinates (zeta, p, phi, F cos(theta)) by
/// centered differences; its determinant measures phase-space volume change.
Eigen::Matrix4d flow_jacobian(const LatticeParams& params, const ClassicalState& s, double tau,
                              const IntegratorOptions& options = {}, double delta = 1e-6);

}  // namespace modw
