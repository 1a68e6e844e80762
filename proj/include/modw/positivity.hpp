#pragma once

#include <string>
#include <vector>

#include "modw/classical.hpp"
#include "modw/ensemble.hpp"
#include "modw/evolution.hpp"
#include "modw/pseudo_density.hpp"

namespace modw {

struct PositivityOptions {
  int grid_n = 256;
  ReconstructionOptions reconstruction{};
  QuadratureSpec quadrature{};
  EvolveOptions quantum{};
  IntegratorOptions classical{2e-3, SplittingOrder::kSixth, 1e-6, 1};
  /// Transport time; negative selects the cat time of the quantum evolution.
  double snapshot_tau = -1.0;
  /// Times of the quantum-evolved controls (the initial state is always included).
  std::vector<double> control_times{0.25, 0.5, 0.75, 1.0};
  /// Coherent-state controls: offsets of alpha and spin polar angles around the frame.
  int coherent_controls = 5;
};

struct ControlResult {
  std::string label;
  double min_eigenvalue = 0.0;
  double fidelity = -1.0;  ///< <psi|rho|psi> for coherent controls, -1 otherwise
  double residual = 0.0;
};

struct PositivityResult {
  HarmonicFrame frame;
  std::vector<ControlResult> controls;
  double noise_floor = 0.0;    ///< eps_rec: largest |negative eigenvalue| among controls
  double min_fidelity = 1.0;   ///< over coherent controls
  double snapshot_tau = 0.0;
  PseudoDensity transported;   ///< reconstruction of the classically transported ensemble
  std::size_t ensemble_size = 0;

  /// Most negative eigenvalue of the transported reconstruction over eps_rec.
  double separation() const;
};

/// Control-versus-treatment test of rho-positivity. Ten benign states (coherent
/// products, the prepared state and its quantum evolution) fix the reconstruction noise
/// floor; the Q-quadrature ensemble of the prepared state is then transported along the
/// classical flow to the snapshot time and reconstructed with the same pipeline.
PositivityResult rho_positivity_test(const LatticeParams& params, const PositivityOptions& options = {});

}  // namespace modw
