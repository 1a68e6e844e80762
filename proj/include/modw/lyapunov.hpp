#pragma once

#include <cstdint>
#include <vector>

#include "modw/classical.hpp"
#include "modw/params.hpp"

namespace modw {

struct LyapunovOptions {
  double tau_total = 200.0;
  double renorm_interval = 0.1;
  double initial_separation = 1e-8;
  IntegratorOptions integrator{};
};

struct LyapunovResult {
  double exponent = 0.0;          ///< dimensionless (per unit tau)
  double per_second = 0.0;        ///< using E_R/hbar = 2 pi * 2 kHz
  bool converged = false;         ///< running estimate stable over the last half
  std::vector<double> times;      ///< renormalization times
  std::vector<double> running;    ///< running estimate at those times
};

/// Largest Lyapunov exponent by the two-trajectory (Benettin) method with periodic
/// renormalization. The reported exponent is the mean running estimate over the
/// last half of the run; it counts as converged when that half varies by less than
/// 5 % of its mean, or by less than 1/tau_total for a vanishing exponent.
LyapunovResult lyapunov(const LatticeParams& params, const ClassicalState& state,
                        const LyapunovOptions& options = {});

/// Samples `trials` shell states at `energy` and returns results for each.
struct ShellLyapunovSurvey {
  std::vector<ClassicalState> states;
  std::vector<LyapunovResult> results;
  /// Median exponent among trajectories classified chaotic (exponent > threshold).
  double chaotic_median = 0.0;
  int chaotic_count = 0;
};
ShellLyapunovSurvey lyapunov_survey(const LatticeParams& params, double energy, int trials,
                                    std::uint64_t seed, const LyapunovOptions& options,
                                    double chaotic_threshold = 0.1);

}  // namespace modw
