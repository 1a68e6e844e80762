#pragma once

#include <string>

#include "modw/params.hpp"

namespace modw {

struct SearchRange {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;  ///< 1 samples lo only

  double at(int i) const { return steps <= 1 ? lo : lo + (hi - lo) * i / (steps - 1); }
};

struct CalibrationTargets {
  double barrier_lo = -192.0;
  double barrier_hi = -186.0;
  double split_lo = 0.3;   ///< "O(1 E_R)" window for the exact ground doublet
  double split_hi = 3.0;
  double split_target = 1.7;
  double bo_split_target = 3.6;
  int n_basis = 64;
};

struct CalibrationCandidate {
  LatticeParams params;
  bool double_well = false;
  double barrier = 0.0;
  double split_exact = 0.0;
  double split_bo_gauge = 0.0;
  double score = 0.0;  ///< squared relative miss of the two splitting targets plus window penalties
};

struct CalibrationResult {
  bool feasible = false;
  CalibrationCandidate best;  ///< best feasible triple, or the nearest miss
  int evaluated = 0;
  std::string report;
};

CalibrationCandidate evaluate_candidate(const LatticeParams& params,
                                        const CalibrationTargets& targets);

/// Grid search over (u0, theta_L [rad], bx). Feasible: V_1 is a double well, the barrier
/// lies in the window and the exact splitting lies in [split_lo, split_hi].
CalibrationResult calibrate(const LatticeParams& base, const SearchRange& u0,
                            const SearchRange& theta_l, const SearchRange& bx,
                            const CalibrationTargets& targets = {});

}  // namespace modw
