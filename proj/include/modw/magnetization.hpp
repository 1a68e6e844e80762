#pragma once

#include <cstdint>
#include <vector>

#include "modw/classical.hpp"
#include "modw/coherent.hpp"
#include "modw/ensemble.hpp"
#include "modw/evolution.hpp"

namespace modw {

struct MagnetizationRow {
  double tau = 0.0;
  double fz_quantum = 0.0;
  double fz_classical = 0.0;
  double mc_error = 0.0;
};

struct CompareOptions {
  int grid_n = 256;
  MetropolisOptions sampler{};
  EvolveOptions quantum{};
  IntegratorOptions classical{};
  int persistence = 3;  ///< consecutive rows beyond 3 sigma that define divergence
};

struct MagnetizationComparison {
  std::vector<MagnetizationRow> rows;
  double divergence_tau = -1.0;  ///< negative when the curves never separate
  double sign = 1.0;             ///< global sign of the classical estimator
  HarmonicFit fit;
  Ensemble initial;
  QuantumTrajectory quantum;
};

/// Quantum <F_z>(tau) from the left-well initial state against the Q-sampled classical
/// ensemble transported to the same times (tau_grid ascending, starting at 0).
MagnetizationComparison compare_magnetization(const LatticeParams& params,
                                              const std::vector<double>& tau_grid,
                                              const CompareOptions& options);

/// First row index from which |fz_q - fz_c| > 3 mc_error holds for `persistence` rows.
int divergence_index(const std::vector<MagnetizationRow>& rows, int persistence);

}  // namespace modw
