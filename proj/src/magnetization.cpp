#include "modw/magnetization.hpp"

#include <cmath>

#include "modw/errors.hpp"

namespace modw {

int divergence_index(const std::vector<MagnetizationRow>& rows, int persistence)
{
  const int n = static_cast<int>(rows.size());
  const int need = std::max(persistence, 1);
  int run = 0;
  for (int i = 0; i < n; ++i) {
    const MagnetizationRow& r = rows[static_cast<std::size_t>(i)];
    if (std::abs(r.fz_quantum - r.fz_classical) > 3.0 * r.mc_error) {
      if (++run == need) return i - need + 1;
    } else {
      run = 0;
    }
  }
  return -1;
}

MagnetizationComparison compare_magnetization(const LatticeParams& params, const std::vector<double>& tau_grid,
                                              const CompareOptions& options)
{
  if (tau_grid.empty() || tau_grid.front() != 0.0) throw ConfigError("tau grid must start at 0");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] > tau_grid[i - 1])) throw ConfigError("tau grid must be strictly ascending");

  const PeriodicGrid grid = PeriodicGrid::for_lattice(params, options.grid_n);
  const InitialState init = initial_state(params, grid, Well::kLeft);
  const HarmonicFrame frame = HarmonicFrame::from_fit(init.fit);

  MagnetizationComparison out;
  out.fit = init.fit;
  out.initial = metropolis_sample(init.psi, frame, options.sampler);

  EvolveOptions qo = options.quantum;
  qo.snapshot_times = tau_grid;
  out.quantum = evolve(params, init.psi, tau_grid.back(), qo);
  if (out.quantum.snapshots.size() != tau_grid.size()) throw NumericalError("missing quantum snapshots");

  const SpinorHamiltonian h(params, grid);
  const int f = params.f_spin;
  const double fz0 = h.expectation(out.quantum.snapshots.front()).fz;
  out.sign = magnetization_sign(out.initial, f, fz0);

  Ensemble ens = out.initial;
  double t = 0.0;
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    ens = propagate_ensemble(params, ens, tau_grid[i] - t, options.classical);
    t = tau_grid[i];
    const Estimate c = mean_fz_classical(ens, f, out.sign);
    out.rows.push_back({t, h.expectation(out.quantum.snapshots[i]).fz, c.value, c.std_error});
  }
  const int k = divergence_index(out.rows, options.persistence);
  if (k >= 0) out.divergence_tau = out.rows[static_cast<std::size_t>(k)].tau;
  return out;
}

}  // namespace modw
