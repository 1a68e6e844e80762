#include "modw/spectra.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "modw/adiabatic.hpp"
#include "modw/errors.hpp"
#include "modw/spin.hpp"

namespace modw {

namespace {

constexpr int kGaugeRefinement = 16;

std::vector<double> plane_wave_levels(const LatticeParams& p, const SpinMatrices& spin, int n_basis, int count)
{
  const int d = spin.dim();
  const int size = n_basis * d;
  const double kstep = 2.0 * std::numbers::pi / p.domain_length();
  const int shift = p.n_periods;  // e^{2 i zeta} moves k by 2 = n_periods steps
  const double c = std::cos(p.theta_l);
  const double s = std::sin(p.theta_l);
  const std::complex<double> up(0.0, p.u0 * s / (2.0 * p.f_spin));  // coefficient of e^{+2i zeta} Fz
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size, size);
  const Eigen::MatrixXcd fx = (p.bx / p.f_spin) * spin.fx;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd plus = p.u0 * c * id + up * spin.fz;                  // <j + shift| . |j>
  const Eigen::MatrixXcd minus = p.u0 * c * id + std::conj(up) * spin.fz;      // <j - shift| . |j>
  for (int j = 0; j < n_basis; ++j) {
    const double k = kstep * (j - n_basis / 2);
    h.block(j * d, j * d, d, d) = fx + k * k * id;
    if (j + shift < n_basis) h.block((j + shift) * d, j * d, d, d) = plus;
    if (j - shift >= 0) h.block((j - shift) * d, j * d, d, d) = minus;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("plane-wave Hamiltonian eigensolver failed");
  const int m = std::min(count, size);
  return std::vector<double>(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
}

double max_change(const std::vector<double>& a, const std::vector<double>& b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

std::string to_string(LevelSource source)
{
  switch (source) {
    case LevelSource::kExact: return "exact";
    case LevelSource::kBornOppenheimer: return "bo";
    case LevelSource::kBornOppenheimerGauge: return "bo_plus_gauge";
    case LevelSource::kCustom: return "custom";
  }
  return "unknown";
}

EnergyLevels full_hamiltonian_levels(const LatticeParams& params, int n_basis, int count, double tolerance)
{
  params.validate_allow_free();
  if (n_basis < 4) throw ConfigError("n_basis must be at least 4");
  const SpinMatrices spin = build_spin_matrices(params.f_spin);
  const auto coarse = plane_wave_levels(params, spin, n_basis, count);
  const auto fine = plane_wave_levels(params, spin, 2 * n_basis, count);
  EnergyLevels out;
  out.values = fine;
  out.source = LevelSource::kExact;
  out.basis_size = 2 * n_basis;
  out.convergence = max_change(coarse, fine);
  if (out.convergence > tolerance) {
    std::ostringstream os;
    os << "plane-wave levels changed by " << out.convergence << " under basis doubling (" << n_basis
       << " -> " << 2 * n_basis << "); increase n_basis";
    throw ResolutionError(os.str());
  }
  return out;
}

std::vector<double> fourier_grid_levels(const PeriodicGrid& grid, const Eigen::VectorXd& potential, int count)
{
  const int n = grid.size();
  const Eigen::VectorXd k = grid.wavenumbers();
  const double h = grid.spacing();
  Eigen::VectorXd t(n);
  for (int dd = 0; dd < n; ++dd) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += k(j) * k(j) * std::cos(k(j) * dd * h);
    t(dd) = sum / n;
  }
  Eigen::MatrixXd hm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hm(i, j) = t(std::abs(i - j));
  hm.diagonal() += potential;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Fourier-grid eigensolver failed");
  const int m = std::min(count, n);
  return std::vector<double>(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
}

EnergyLevels bo_levels(const LatticeParams& params, int band, bool with_gauge, int grid_n, int count,
                       double tolerance)
{
  params.validate();
  const SpinMatrices spin = build_spin_matrices(params.f_spin);
  if (band < 0 || band >= spin.dim()) throw ConfigError("band index out of range");
  auto solve = [&](int n) {
    const PeriodicGrid grid = PeriodicGrid::for_lattice(params, n);
    Eigen::VectorXd v = adiabatic_spectrum(params, spin, grid).band(band);
    if (with_gauge) {
      // Finite differences on a finer grid, sampled back onto the Fourier grid.
      const PeriodicGrid fine = PeriodicGrid::for_lattice(params, n * kGaugeRefinement);
      const Eigen::VectorXd phi = gauge_correction(adiabatic_spectrum(params, spin, fine), band);
      for (int i = 0; i < n; ++i) v(i) += phi(i * kGaugeRefinement);
    }
    return fourier_grid_levels(grid, v, count);
  };
  const auto coarse = solve(grid_n);
  const auto fine = solve(2 * grid_n);
  EnergyLevels out;
  out.values = fine;
  out.source = with_gauge ? LevelSource::kBornOppenheimerGauge : LevelSource::kBornOppenheimer;
  out.basis_size = 2 * grid_n;
  out.convergence = max_change(coarse, fine);
  if (out.convergence > tolerance) {
    std::ostringstream os;
    os << "BO levels changed by " << out.convergence << " under grid doubling (" << grid_n << " -> "
       << 2 * grid_n << "); increase grid_n";
    throw ResolutionError(os.str());
  }
  return out;
}

}  // namespace modw
