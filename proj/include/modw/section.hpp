#pragma once

#include <cstdint>
#include <vector>

#include "modw/classical.hpp"
#include "modw/params.hpp"

namespace modw {

/// Crossing of the p = 0 plane with dp/dtau > 0 (left turning point).
struct SectionPoint {
  double phi = 0.0;
  double n_z = 0.0;
  double zeta = 0.0;
  double tau = 0.0;
  int seed_index = 0;  ///< which initial condition produced it
};

struct SectionOptions {
  int seeds = 24;
  double tau_max = 100.0;
  std::uint64_t rng_seed = 1;
  IntegratorOptions integrator{};
  double p_tolerance = 1e-10;
};

/// All zeta in the domain with p = 0 on the energy shell for spin direction n.
std::vector<double> energy_shell_positions(const LatticeParams& params, double energy,
                                           const Eigen::Vector3d& n, int scan_points = 2048);

/// Draws a point on the p = 0 energy shell: (phi, cos theta) uniform, zeta a random
/// root of classical_potential = E; rejects draws without a root.
ClassicalState sample_shell_state(const LatticeParams& params, double energy,
                                  std::uint64_t seed, int max_tries = 100000);

/// Section points from `options.seeds` shell-sampled trajectories. Throws DomainError
/// if `energy` lies below the global minimum of the classical potential.
std::vector<SectionPoint> poincare_section(const LatticeParams& params, double energy,
                                           const SectionOptions& options);

/// Section points of a single trajectory.
std::vector<SectionPoint> section_crossings(const LatticeParams& params,
                                            const ClassicalState& initial, double tau_max,
                                            const IntegratorOptions& integrator,
                                            double p_tolerance = 1e-10, int seed_index = 0);

/// Global minimum over (zeta, n) of the classical potential, U_J - |b| minimised.
double classical_potential_minimum(const LatticeParams& params);

/// Section return map from (phi, n_z) at p = 0 near position `zeta_hint`.
struct SectionMapResult {
  bool ok = false;
  double phi = 0.0;
  double n_z = 0.0;
  double zeta = 0.0;
  double return_time = 0.0;
};
SectionMapResult section_return_map(const LatticeParams& params, double energy, double phi,
                                    double n_z, double zeta_hint,
                                    const IntegratorOptions& integrator, double tau_limit = 20.0);

/// Fixed point of the section return map, located by Newton iteration.
struct SectionFixedPoint {
  bool converged = false;
  double phi = 0.0;
  double n_z = 0.0;
  double zeta = 0.0;
  double return_time = 0.0;
  double trace = 0.0;  ///< trace of the linearised return map; |trace| < 2 => elliptic
  /// omega2 / omega1 along the periodic orbit: omega1 = 2 pi / return_time, omega2 the
  /// time average of |b| / F (spin precession rate about the local field).
  double winding = 0.0;
  bool elliptic() const { return converged && trace > -2.0 && trace < 2.0; }
};
SectionFixedPoint find_section_fixed_point(const LatticeParams& params, double energy,
                                           double phi_guess, double nz_guess, double zeta_hint,
                                           const IntegratorOptions& integrator);

/// Centres of the island chain of the omega2/omega1 = `ratio` resonance at `energy`.
/// The resonant torus is located on the integrable adiabatic surfaces (see
/// resonance_scan_alpha), and each of `seeds` points on its section curve is refined
/// by Newton iteration on the full return map. Returns the distinct converged fixed points.
std::vector<SectionFixedPoint> resonant_island_centres(const LatticeParams& params, double energy,
                                                       double ratio, double zeta_start,
                                                       const IntegratorOptions& integrator,
                                                       int seeds = 16);

}  // namespace modw
