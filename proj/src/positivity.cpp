#include "modw/positivity.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "modw/errors.hpp"

namespace modw {

namespace {

std::string evolved_label(double tau)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "evolved_%.3f", tau);
  return buf;
}

}  // namespace

double PositivityResult::separation() const
{
  return noise_floor > 0.0 ? -transported.min_eigenvalue() / noise_floor : 0.0;
}

PositivityResult rho_positivity_test(const LatticeParams& params, const PositivityOptions& options)
{
  const PeriodicGrid grid = PeriodicGrid::for_lattice(params, options.grid_n);
  const InitialState init = initial_state(params, grid, Well::kLeft);
  const int f = params.f_spin;

  PositivityResult out;
  out.frame = HarmonicFrame::from_fit(init.fit);
  const PseudoDensityReconstructor rec(f, options.reconstruction);

  QuadratureSpec spec = options.quadrature;
  spec.zeta_lo = grid.start();
  spec.zeta_hi = grid.start() + grid.length();

  auto record = [&](const std::string& label, const PseudoDensity& rho, double fidelity) {
    out.controls.push_back({label, rho.min_eigenvalue(), fidelity, rho.residual});
    out.noise_floor = std::max(out.noise_floor, -rho.min_eigenvalue());
  };

  // Coherent products spread over the well and the sphere.
  for (int k = 0; k < options.coherent_controls; ++k) {
    const double s = options.coherent_controls > 1 ? static_cast<double>(k) / (options.coherent_controls - 1) : 0.0;
    const CoherentLabel c{std::polar(0.2 + 0.6 * s, 2.0 * std::numbers::pi * s), 0.3 + 2.4 * s, 1.7 * k};
    QuadratureSpec cs = spec;
    cs.p_center = out.frame.p_of(c.alpha);
    const Ensemble ens = quadrature_ensemble([&](const CoherentLabel& l) { return coherent_product_q(c, l, f); },
                                             out.frame, f, cs);
    const PseudoDensity rho = rec.reconstruct(ens, out.frame);
    Eigen::VectorXcd v = rec.coherent_vector(c.alpha, c.theta, c.phi);
    v.normalize();
    const double fid = rho.expectation(v);
    out.min_fidelity = std::min(out.min_fidelity, fid);
    record("coherent_" + std::to_string(k), rho, fid);
  }

  const Ensemble initial = quadrature_ensemble(init.psi, out.frame, spec);
  out.ensemble_size = initial.size();
  record("prepared", rec.reconstruct(initial, out.frame), -1.0);

  double tau = options.snapshot_tau;
  EvolveOptions qo = options.quantum;
  qo.snapshot_times = options.control_times;
  double span = options.control_times.empty() ? 0.0 : options.control_times.back();
  if (tau < 0.0) span = std::max(span, 1.5);
  QuantumTrajectory tr = evolve(params, init.psi, span, qo);
  if (tau < 0.0) {
    tau = cat_time(tr);
    if (tau < 0.0) throw NumericalError("<F_z> does not change sign; no cat time for the snapshot");
  }
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    if (tr.snapshot_times[i] == 0.0) continue;
    const Ensemble e = quadrature_ensemble(tr.snapshots[i], out.frame, spec);
    record(evolved_label(tr.snapshot_times[i]), rec.reconstruct(e, out.frame), -1.0);
  }

  out.snapshot_tau = tau;
  const Ensemble moved = propagate_ensemble(params, initial, tau, options.classical);
  out.transported = rec.reconstruct(moved, out.frame);
  return out;
}

}  // namespace modw
