#include "modw/evolution.hpp"

#include <cmath>
#include <sstream>

#include "modw/errors.hpp"
#include "modw/potential.hpp"

namespace modw {

SpinorHamiltonian::SpinorHamiltonian(const LatticeParams& params, const PeriodicGrid& grid)
    : params_(params),
      grid_(grid),
      spin_(build_spin_matrices(params.f_spin)),
      fft_(grid.size(), params.spin_dim())
{
  const int n = grid.size();
  potential_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) potential_.push_back(potential_matrix(params, spin_, grid.x(i)));
  k2_ = grid.wavenumbers().array().square();
}

Observables SpinorHamiltonian::expectation(const SpinorWavefunction& psi) const
{
  const int n = grid_.size();
  const double h = grid_.spacing();
  Observables o;
  o.norm = psi.norm();
  Eigen::MatrixXcd mom = psi.amps;
  fft_.forward(mom);
  o.kinetic = (k2_.asDiagonal() * mom.cwiseAbs2()).sum() * h / n / o.norm;
  double v = 0.0, fz = 0.0, z = 0.0;
  const int d = psi.dim();
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXcd row = psi.amps.row(i).transpose();
    v += row.dot(potential_[static_cast<std::size_t>(i)] * row).real();
    double rho = 0.0;
    for (int c = 0; c < d; ++c) {
      const double a2 = std::norm(row(c));
      fz += (c - spin_.f) * a2;
      rho += a2;
    }
    z += grid_.x(i) * rho;
  }
  o.potential = v * h / o.norm;
  o.fz = fz * h / o.norm;
  o.zeta_mean = z * h / o.norm;
  o.energy = o.kinetic + o.potential;
  return o;
}

SpinorWavefunction SpinorHamiltonian::apply(const SpinorWavefunction& psi) const
{
  SpinorWavefunction out = psi;
  Eigen::MatrixXcd mom = psi.amps;
  fft_.forward(mom);
  mom = k2_.asDiagonal() * mom;
  fft_.backward(mom);
  for (int i = 0; i < grid_.size(); ++i)
    mom.row(i) += (potential_[static_cast<std::size_t>(i)] * psi.amps.row(i).transpose()).transpose();
  out.amps = std::move(mom);
  return out;
}

QuantumPropagator::QuantumPropagator(const LatticeParams& params, const PeriodicGrid& grid, double dtau)
    : hamiltonian_(params, grid), dtau_(dtau)
{
  if (!(dtau > 0.0)) throw ConfigError("dtau must be positive");
  const int f = params.f_spin;
  const int d = params.spin_dim();
  potential_step_.reserve(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    const double z = grid.x(i);
    const double b = effective_field(params, z).norm();
    // exp(-i V dtau) = exp(-i U_J dtau) * exp(-i (|b| dtau / F) n_b . F)
    Eigen::MatrixXcd u = spin_rotation_xz(f, field_polar_angle(params, z), b * dtau / f);
    u *= std::polar(1.0, -scalar_potential(params, z) * dtau);
    (void)d;
    potential_step_.push_back(std::move(u));
  }
  const Eigen::VectorXd k = grid.wavenumbers();
  kinetic_half_.resize(grid.size());
  for (int j = 0; j < grid.size(); ++j) kinetic_half_(j) = std::polar(1.0, -0.5 * k(j) * k(j) * dtau);
}

namespace {

void apply_pointwise(const std::vector<Eigen::MatrixXcd>& ops, Eigen::MatrixXcd& amps)
{
  const Eigen::Index n = amps.rows();
  Eigen::VectorXcd tmp(amps.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    tmp.noalias() = ops[static_cast<std::size_t>(i)] * amps.row(i).transpose();
    amps.row(i) = tmp.transpose();
  }
}

}  // namespace

void QuantumPropagator::step(SpinorWavefunction& psi) const { advance(psi, 1); }

void QuantumPropagator::advance(SpinorWavefunction& psi, long steps) const
{
  if (steps <= 0) return;
  const ColumnFft& fft = hamiltonian_.fft();
  const Eigen::VectorXcd kin_full = kinetic_half_.array().square();
  // K/2 (V K)^(steps-1) V K/2, with neighbouring kinetic halves merged.
  fft.forward(psi.amps);
  psi.amps = kinetic_half_.asDiagonal() * psi.amps;
  for (long s = 0; s < steps; ++s) {
    fft.backward(psi.amps);
    apply_pointwise(potential_step_, psi.amps);
    fft.forward(psi.amps);
    if (s + 1 < steps) psi.amps = kin_full.asDiagonal() * psi.amps;
  }
  psi.amps = kinetic_half_.asDiagonal() * psi.amps;
  fft.backward(psi.amps);
}

double QuantumTrajectory::max_norm_drift() const
{
  double m = 0.0;
  for (double n : norm) m = std::max(m, std::abs(n - norm.front()));
  return m;
}

double QuantumTrajectory::max_relative_energy_drift() const
{
  double m = 0.0;
  const double scale = std::abs(energy.front()) > 0.0 ? std::abs(energy.front()) : 1.0;
  for (double e : energy) m = std::max(m, std::abs(e - energy.front()) / scale);
  return m;
}

QuantumTrajectory evolve(const LatticeParams& params, const SpinorWavefunction& psi, double tau_span,
                         const EvolveOptions& options)
{
  const QuantumPropagator prop(params, psi.grid, options.dtau);
  const long steps = std::max(0L, std::lround(tau_span / options.dtau));
  const long every = std::max(1, options.record_every);
  std::vector<long> snap_steps;
  for (double t : options.snapshot_times) snap_steps.push_back(std::lround(t / options.dtau));

  QuantumTrajectory tr;
  SpinorWavefunction cur = psi;
  auto record = [&](long i) {
    const Observables o = prop.hamiltonian().expectation(cur);
    tr.times.push_back(i * options.dtau);
    tr.fz.push_back(o.fz);
    tr.energy.push_back(o.energy);
    tr.norm.push_back(o.norm);
  };
  auto snapshot = [&](long i) {
    for (std::size_t k = 0; k < snap_steps.size(); ++k)
      if (snap_steps[k] == i) {
        tr.snapshot_times.push_back(i * options.dtau);
        tr.snapshots.push_back(cur);
      }
  };
  record(0);
  snapshot(0);
  long done = 0;
  while (done < steps) {
    // Advance to the next record or snapshot boundary.
    long next = std::min(steps, (done / every + 1) * every);
    for (long s : snap_steps)
      if (s > done && s < next) next = s;
    prop.advance(cur, next - done);
    done = next;
    if (done % every == 0 || done == steps) record(done);
    snapshot(done);
  }
  if (tr.max_norm_drift() > options.norm_tolerance) {
    std::ostringstream os;
    os << "norm drift " << tr.max_norm_drift() << " exceeds " << options.norm_tolerance << "; reduce dtau";
    throw IntegrationError(os.str());
  }
  if (options.energy_tolerance > 0.0 && tr.max_relative_energy_drift() > options.energy_tolerance) {
    std::ostringstream os;
    os << "relative energy drift " << tr.max_relative_energy_drift() << " exceeds "
       << options.energy_tolerance << " (dtau = " << options.dtau << "); reduce dtau";
    throw IntegrationError(os.str());
  }
  return tr;
}

Observables observables(const LatticeParams& params, const SpinorWavefunction& psi)
{
  return SpinorHamiltonian(params, psi.grid).expectation(psi);
}

HarmonicFit harmonic_fit(const LatticeParams& params, Well side)
{
  const DoubleWell w = analyze_double_well(params);
  HarmonicFit fit;
  fit.center = side == Well::kLeft ? w.left_min : w.right_min;
  fit.curvature = side == Well::kLeft ? w.curvature_left : w.curvature_right;
  if (!(fit.curvature > 0.0)) throw CalibrationError("well curvature is not positive");
  fit.omega = std::sqrt(2.0 * fit.curvature);
  return fit;
}

InitialState initial_state(const LatticeParams& params, const PeriodicGrid& grid, Well side)
{
  params.validate();
  const DoubleWell w = analyze_double_well(params);
  InitialState st;
  st.fit = harmonic_fit(params, side);
  st.barrier = w.barrier;
  st.min_v2 = band_minimum(params, 1);

  const SpinMatrices spin = build_spin_matrices(params.f_spin);
  const AdiabaticSpectrum spec = adiabatic_spectrum(params, spin, grid);
  const double sx2 = 1.0 / st.fit.omega;
  SpinorWavefunction psi(grid, spin.dim());
  for (int i = 0; i < grid.size(); ++i) {
    const double dz = grid.wrap_displacement(grid.x(i) - st.fit.center);
    const double g = std::exp(-dz * dz / (4.0 * sx2));
    psi.amps.row(i) = g * spec.basis(i).col(0).transpose();
  }
  psi.normalize();
  st.psi = std::move(psi);
  st.energy = observables(params, st.psi).energy;
  if (!(st.energy > st.barrier && st.energy < st.min_v2)) {
    std::ostringstream os;
    os << "initial state energy " << st.energy << " not inside (V_1 barrier " << st.barrier
       << ", min V_2 " << st.min_v2 << "); adjust the lattice parameters";
    throw CalibrationError(os.str());
  }
  return st;
}

double cat_time(const QuantumTrajectory& trajectory)
{
  const auto& t = trajectory.times;
  const auto& f = trajectory.fz;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if ((f[i - 1] > 0.0) != (f[i] > 0.0)) {
      const double a = f[i - 1], b = f[i];
      return t[i - 1] + (t[i] - t[i - 1]) * a / (a - b);
    }
  }
  return -1.0;
}

}  // namespace modw
