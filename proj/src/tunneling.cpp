#include "modw/tunneling.hpp"

#include <cmath>

#include "modw/errors.hpp"

namespace modw {

BandPopulations band_populations(const SpinorWavefunction& psi, const AdiabaticSpectrum& spectrum)
{
  const int n = psi.grid.size();
  if (spectrum.grid.size() != n || spectrum.dim() != psi.dim())
    throw ConfigError("band_populations: spectrum and wavefunction grids differ");
  BandPopulations b;
  b.components.resize(n, psi.dim());
  for (int i = 0; i < n; ++i)
    b.components.row(i) = (spectrum.basis(i).adjoint() * psi.amps.row(i).transpose()).transpose();
  b.density = b.components.cwiseAbs2();
  b.totals = b.density.colwise().sum().transpose() * psi.grid.spacing();
  return b;
}

SpinorWavefunction from_band_components(const Eigen::MatrixXcd& components, const AdiabaticSpectrum& spectrum)
{
  SpinorWavefunction psi(spectrum.grid, spectrum.dim());
  for (int i = 0; i < spectrum.grid.size(); ++i)
    psi.amps.row(i) = (spectrum.basis(i) * components.row(i).transpose()).transpose();
  return psi;
}

std::pair<int, int> KineticDensity::longest_negative_run() const
{
  std::pair<int, int> best{-1, -1};
  int start = -1;
  const int n = static_cast<int>(t_of_z.size());
  for (int i = 0; i <= n; ++i) {
    const bool neg = i < n && t_of_z(i) < 0.0;
    if (neg && start < 0) start = i;
    if (!neg && start >= 0) {
      if (best.first < 0 || i - 1 - start > best.second - best.first) best = {start, i - 1};
      start = -1;
    }
  }
  return best;
}

std::pair<int, int> KineticDensity::negative_run_at(double zeta) const
{
  const int n = static_cast<int>(t_of_z.size());
  const int c = grid.wrap_index(static_cast<int>(std::lround((grid.wrap_displacement(zeta) - grid.start()) / grid.spacing())));
  if (t_of_z(c) >= 0.0) return {-1, -1};
  int lo = c, hi = c;
  while (lo > 0 && t_of_z(lo - 1) < 0.0) --lo;
  while (hi + 1 < n && t_of_z(hi + 1) < 0.0) ++hi;
  return {lo, hi};
}

KineticDensity kinetic_energy_density(const SpinorWavefunction& psi, const AdiabaticSpectrum& spectrum,
                                      double mean_energy)
{
  const BandPopulations b = band_populations(psi, spectrum);
  KineticDensity k;
  k.grid = psi.grid;
  k.mean_energy = mean_energy;
  k.populations = b.density;
  const Eigen::MatrixXd excess = (-spectrum.potentials).array() + mean_energy;
  k.t_of_z = excess.cwiseProduct(b.density).rowwise().sum();
  k.integral = k.t_of_z.sum() * psi.grid.spacing();
  return k;
}

}  // namespace modw
