// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.
// Exit status is non-zero only when an outcome differs from the expectation
// (criteria named with --expect-fail are expected to fail).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "helpers.hpp"
#include "modw/adiabatic.hpp"
#include "modw/classical.hpp"
#include "modw/coherent.hpp"
#include "modw/ensemble.hpp"
#include "modw/evolution.hpp"
#include "modw/frequencies.hpp"
#include "modw/lyapunov.hpp"
#include "modw/magnetization.hpp"
#include "modw/positivity.hpp"
#include "modw/potential.hpp"
#include "modw/rng.hpp"
#include "modw/section.hpp"
#include "modw/spectra.hpp"
#include "modw/spin.hpp"
#include "modw/tunneling.hpp"
#include "modw/units.hpp"

using namespace modw;
using std::numbers::pi;

namespace {

// Pinned tolerances.
constexpr double kAlgebraTol = 1e-12;
constexpr double kPendulumTol = 1e-12;   // relative to max(1, |u0|)
constexpr double kEnergyDriftTol = 1e-8;
constexpr double kSpinNormTol = 1e-12;
constexpr double kNzTol = 1e-12;
constexpr double kReversalTol = 1e-9;
constexpr double kOmega1Tol = 1e-6;
constexpr double kUnitarityTol = 1e-8;
constexpr double kStrangRatio = 4.0, kStrangTol = 0.5;
constexpr double kKedTol = 1e-8;
constexpr double kFirstMomentTol = 1e-6;
constexpr double kFidelity = 0.99;
constexpr double kBreakTimeUs = 86.6, kBreakTimeTolUs = 0.1;
constexpr double kReferenceLambda = 1.6e4;   // s^-1
constexpr double kSectionEnergy = -186.8;
constexpr double kIslandRatio = 4.0, kIslandRatioTol = 0.05;
constexpr double kIslandNz = 0.38, kIslandNzTol = 0.1;
constexpr double kLambdaLo = 0.5e4, kLambdaHi = 5e4;
constexpr double kSplitRatioLo = 1.5, kSplitRatioHi = 3.0;
constexpr double kViolationFactor = 5.0;
constexpr double kLowestBandMass = 0.9;
constexpr int kCompareSamples = 100000;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 6)
{
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

const LatticeParams kParams = default_params();

// Results shared between criteria, computed on first use.
struct Shared {
  std::optional<EnergyLevels> exact;
  std::optional<double> lambda_per_second;
  std::optional<PositivityResult> positivity;

  const EnergyLevels& exact_levels()
  {
    if (!exact) exact = full_hamiltonian_levels(kParams, 64, 4, 1e-6);
    return *exact;
  }
  double lambda()
  {
    if (!lambda_per_second) {
      const PeriodicGrid g = PeriodicGrid::for_lattice(kParams, 256);
      LyapunovOptions o;
      o.tau_total = 2000.0;
      o.integrator.energy_tolerance = 0.0;
      const ShellLyapunovSurvey s =
          lyapunov_survey(kParams, initial_state(kParams, g, Well::kLeft).energy, 12, derive_seed(kSeed, 1), o);
      lambda_per_second = units::rate_to_per_second(s.chaotic_median);
    }
    return *lambda_per_second;
  }
  const PositivityResult& rho()
  {
    if (!positivity) positivity = rho_positivity_test(kParams);
    return *positivity;
  }
};

Shared shared;

ClassicalState random_state(const LatticeParams& p, std::mt19937_64& rng, double e_max)
{
  std::uniform_real_distribution<double> uz(-pi / 2, pi / 2), uc(-1.0, 1.0), uphi(0.0, 2 * pi), up(-6.0, 6.0);
  for (;;) {
    ClassicalState s = ClassicalState::from_angles(uz(rng), up(rng), std::acos(uc(rng)), uphi(rng));
    if (classical_energy(p, s) < e_max) return s;
  }
}

LatticeParams without_bx()
{
  LatticeParams p = kParams;
  p.bx = 0.0;
  return p;
}

double reversal_error(const LatticeParams& p, const ClassicalState& s0, double tau)
{
  const ClassicalIntegrator integ(p, SplittingOrder::kSixth);
  ClassicalState s = s0;
  integ.advance(s, tau, 1e-3);
  integ.advance(s, -tau, 1e-3);
  return std::max({std::abs(s.zeta - s0.zeta), std::abs(s.p - s0.p), (s.n - s0.n).norm()});
}

// ---------------------------------------------------------------------------

Outcome spin_algebra()
{
  const cplx i(0.0, 1.0);
  auto comm = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return Eigen::MatrixXcd(a * b - b * a); };
  double err = 0.0;
  for (int f : {1, 2, 4}) {
    const SpinMatrices s = build_spin_matrices(f);
    const Eigen::MatrixXcd id = f * (f + 1.0) * Eigen::MatrixXcd::Identity(s.dim(), s.dim());
    err = std::max({err, testing::max_abs_diff(comm(s.fx, s.fy), i * s.fz),
                    testing::max_abs_diff(comm(s.fy, s.fz), i * s.fx),
                    testing::max_abs_diff(comm(s.fz, s.fx), i * s.fy),
                    testing::max_abs_diff(s.fx * s.fx + s.fy * s.fy + s.fz * s.fz, id)});
  }
  return {err <= kAlgebraTol, "F in {1,2,4}, max error " + fmt(err, 3)};
}

Outcome pendulum_identity()
{
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uz(-pi, pi), un(-1.0, 1.0), ut(0.01, pi - 0.01);
  double err = 0.0;
  for (int k = 0; k < 100; ++k) {
    LatticeParams p = without_bx();
    p.theta_l = ut(rng);
    const double z = uz(rng), nz = un(rng);
    const PendulumForm pf = pendulum_form(p, nz);
    const double lhs = scalar_potential(p, z) + nz * fictitious_field(p, z);
    const double c = p.u0 * std::sqrt(4.0 * std::pow(std::cos(p.theta_l), 2) +
                                      nz * nz * std::pow(std::sin(p.theta_l), 2));
    const double scale = std::max(1.0, std::abs(p.u0));
    err = std::max({err, std::abs(lhs - pf.amplitude * std::cos(2.0 * z + pf.phase)) / scale,
                    std::abs(std::abs(pf.amplitude) - std::abs(c)) / scale});
  }
  return {err <= kPendulumTol, "100 draws, max relative error " + fmt(err, 3)};
}

Outcome integrator_invariants()
{
  const LatticeParams p = kParams;
  std::mt19937_64 rng(3);
  IntegratorOptions o;
  o.record_every = 1000;
  o.energy_tolerance = 0.0;
  double drift = 0.0, norm = 0.0, reversal = 0.0;
  for (int k = 0; k < 40; ++k) {
    const ClassicalState s0 = random_state(p, rng, -150.0);
    const Trajectory tr = integrate(p, s0, 100.0, o);
    drift = std::max(drift, tr.max_relative_energy_drift());
    for (const ClassicalState& s : tr.states) norm = std::max(norm, std::abs(s.n.norm() - 1.0));
    // Chaotic orbits amplify rounding as exp(lambda tau); reversal is checked on a short horizon.
    reversal = std::max(reversal, reversal_error(p, s0, 1.0));
  }
  const LatticeParams q = without_bx();
  reversal = std::max(reversal, reversal_error(q, ClassicalState::from_angles(-0.6, 0.0, 1.1, 0.2), 100.0));
  double nz = 0.0;
  for (int k = 0; k < 10; ++k) {
    const ClassicalState s0 = random_state(q, rng, -100.0);
    const Trajectory tr = integrate(q, s0, 100.0, o);
    for (const ClassicalState& s : tr.states) nz = std::max(nz, std::abs(s.n.z() - s0.n.z()));
  }
  const bool ok = drift <= kEnergyDriftTol && norm <= kSpinNormTol && nz <= kNzTol && reversal <= kReversalTol;
  return {ok, "energy drift " + fmt(drift, 3) + " over tau=100, | |n|-1 | " + fmt(norm, 3) + ", bx=0 n_z change " +
                  fmt(nz, 3) + ", reversal " + fmt(reversal, 3)};
}

Outcome omega1_elliptic()
{
  const LatticeParams p = without_bx();
  const double nz = 0.3;
  IntegratorOptions o;
  o.dtau = 5e-4;
  o.energy_tolerance = 0.0;
  double err = 0.0;
  for (double kappa : {0.1, 0.3, 0.6}) {
    const double c = std::abs(pendulum_form(p, nz).amplitude);
    const double e = (2 * kappa * kappa - 1) * c;
    const Eigen::Vector3d n(std::sqrt(1 - nz * nz), 0.0, nz);
    ClassicalState s0;
    s0.zeta = energy_shell_positions(p, e, n).front();
    s0.n = n;
    const std::vector<SectionPoint> pts = section_crossings(p, s0, 3.0, o, 1e-12);
    if (pts.size() < 3) return {false, "orbit produced fewer than 3 section crossings"};
    const double period = (pts.back().tau - pts.front().tau) / (pts.size() - 1);
    err = std::max(err, std::abs(2 * pi / period / pendulum_action_angle(p, nz, e).freq.omega1 - 1.0));
  }
  return {err < kOmega1Tol, "kappa in {0.1,0.3,0.6}, max relative error " + fmt(err, 3)};
}

Outcome quantum_unitarity()
{
  const PeriodicGrid g = PeriodicGrid::for_lattice(kParams, 256);
  const InitialState st = initial_state(kParams, g, Well::kLeft);
  EvolveOptions o;
  o.record_every = 100;
  o.norm_tolerance = 1.0;
  const QuantumTrajectory tr = evolve(kParams, st.psi, 1e4 * o.dtau, o);
  const double nd = tr.max_norm_drift(), ed = tr.max_relative_energy_drift();

  auto final_state = [&](double dt) {
    const QuantumPropagator prop(kParams, g, dt);
    SpinorWavefunction psi = st.psi;
    prop.advance(psi, std::lround(0.1 / dt));
    return psi;
  };
  const SpinorWavefunction a = final_state(4e-4), b = final_state(2e-4), c = final_state(1e-4);
  const double ratio = (a.amps - b.amps).norm() / (b.amps - c.amps).norm();
  const bool ok = nd <= kUnitarityTol && ed <= kUnitarityTol && std::abs(ratio - kStrangRatio) <= kStrangTol;
  return {ok, "1e4 steps: norm drift " + fmt(nd, 3) + ", energy drift " + fmt(ed, 3) + "; halving ratio " + fmt(ratio, 4)};
}

// <p^2> by a direct DFT sum, independent of the FFTW route.
double kinetic_by_dft(const SpinorWavefunction& psi)
{
  const PeriodicGrid& g = psi.grid;
  const int n = g.size();
  double t = 0.0, norm = 0.0;
  for (int c = 0; c < psi.dim(); ++c)
    for (int j = -n / 2; j < n / 2; ++j) {
      const double k = 2 * pi * j / g.length();
      cplx a = 0.0;
      for (int i = 0; i < n; ++i) a += psi.amps(i, c) * std::polar(1.0, -k * g.x(i));
      t += k * k * std::norm(a);
      norm += std::norm(a);
    }
  return t / norm;
}

Outcome kinetic_identity()
{
  const PeriodicGrid g = PeriodicGrid::for_lattice(kParams, 128);
  const AdiabaticSpectrum sp = adiabatic_spectrum(kParams, build_spin_matrices(4), g);
  std::mt19937_64 rng(6);
  double err = 0.0;
  for (int k = 0; k < 5; ++k) {
    const SpinorWavefunction r = testing::random_smooth_state(g, 9, rng);
    const KineticDensity kd = kinetic_energy_density(r, sp, observables(kParams, r).energy);
    const double ref = kinetic_by_dft(r);
    err = std::max(err, std::abs(kd.t_of_z.sum() * g.spacing() - ref) / ref);
  }
  return {err <= kKedTol, "5 random states, max relative error " + fmt(err, 3)};
}

Outcome gauge_monotonicity()
{
  const EnergyLevels& exact = shared.exact_levels();
  const EnergyLevels bo = bo_levels(kParams, 0, false, 256, 6, 1e-6);
  const EnergyLevels bog = bo_levels(kParams, 0, true, 256, 6, 1e-6);
  const PeriodicGrid g = PeriodicGrid::for_lattice(kParams, 2048);
  const double phi_min = gauge_correction(adiabatic_spectrum(kParams, build_spin_matrices(4), g), 0).minCoeff();
  double raise = 1e300;
  for (int i = 0; i < 6; ++i) raise = std::min(raise, bog.values[i] - bo.values[i]);
  // The Born-Oppenheimer ground level that bounds the exact one from above is the
  // gauge-corrected one; the uncorrected level bounds it from below.
  const double e0 = exact.values[0];
  const bool ok = phi_min >= 0.0 && raise > 0.0 && e0 <= bog.values[0];
  return {ok, "min Phi_1 " + fmt(phi_min, 3) + ", min level shift " + fmt(raise, 4) + "; exact " + fmt(e0, 8) +
                  " <= BO+gauge " + fmt(bog.values[0], 8) + " (BO without gauge " + fmt(bo.values[0], 8) + ")"};
}

Outcome first_moment()
{
  const PeriodicGrid g = PeriodicGrid::for_lattice(kParams, 256);
  const HarmonicFrame frame = HarmonicFrame::from_fit(harmonic_fit(kParams, Well::kLeft));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ua(-0.8, 0.8), uth(0.0, pi), uph(0.0, 2 * pi);
  std::normal_distribution<double> nd;
  auto random_pure = [&] {
    SpinorWavefunction psi(g, 9);
    for (int k = 0; k < 3; ++k)
      psi.amps += cplx(nd(rng), nd(rng)) *
                  coherent_product_state(g, frame, 4, CoherentLabel{{ua(rng), ua(rng)}, uth(rng), uph(rng)}).amps;
    psi.normalize();
    return psi;
  };
  QuadratureSpec spec;
  spec.n_zeta = 48;
  spec.n_p = 48;
  spec.p_half_width = 9 * frame.sigma_p();
  spec.prune = 0.0;
  double err = 0.0;
  for (int k = 0; k < 5; ++k) {
    const SpinorWavefunction psi = random_pure();
    const Ensemble q = quadrature_ensemble(psi, frame, spec);
    err = std::max(err, std::abs(mean_fz_classical(q, 4).value * q.total_weight() - observables(kParams, psi).fz));
  }
  const SpinorWavefunction psi = random_pure();
  MetropolisOptions o;
  o.count = 10000;
  o.seed = derive_seed(kSeed, 2);
  const Estimate est = mean_fz_classical(metropolis_sample(psi, frame, o), 4);
  const double z = std::abs(est.value - observables(kParams, psi).fz) / est.std_error;
  return {err <= kFirstMomentTol && z < 3.0,
          "quadrature max error " + fmt(err, 3) + "; Metropolis deviation " + fmt(z, 3) + " sigma"};
}

Outcome positivity_control()
{
  const PositivityResult& r = shared.rho();
  double evolved_floor = 0.0;
  for (const ControlResult& c : r.controls) evolved_floor = std::min(evolved_floor, c.min_eigenvalue);

  // Held-out quantum-evolved states, not used to calibrate eps_rec.
  const PeriodicGrid g = PeriodicGrid::for_lattice(kParams, 256);
  EvolveOptions eo;
  eo.record_every = 1 << 30;
  eo.snapshot_times = {0.375, 0.875};
  const QuantumTrajectory tr = evolve(kParams, initial_state(kParams, g, Well::kLeft).psi, 0.875, eo);
  const PseudoDensityReconstructor rec(4);
  double held_out = 0.0;
  for (const SpinorWavefunction& psi : tr.snapshots)
    held_out = std::min(held_out, rec.reconstruct(quadrature_ensemble(psi, r.frame, {}), r.frame).min_eigenvalue());

  const bool ok = held_out >= -r.noise_floor && r.min_fidelity > kFidelity;
  return {ok, "eps_rec " + fmt(r.noise_floor, 4) + " from " + std::to_string(r.controls.size()) +
                  " controls; held-out evolved floor " + fmt(held_out, 4) + "; coherent fidelity min " +
                  fmt(r.min_fidelity, 5)};
}

Outcome break_time_formula()
{
  const double us = 1e6 * break_time(kReferenceLambda, 4.0);
  return {std::abs(us - kBreakTimeUs) <= kBreakTimeTolUs,
          "ln(4)/1.6e4 s^-1 = " + fmt(us, 5) + " us"};
}

Outcome island_chain()
{
  const DoubleWell w = analyze_double_well(kParams);
  IntegratorOptions o;
  o.energy_tolerance = 0.0;
  std::vector<SectionFixedPoint> found = resonant_island_centres(kParams, kSectionEnergy, kIslandRatio, w.left_min, o);
  // Independent Newton seeds around the target location.
  for (double phi : {0.0, 0.5 * pi, pi, 1.5 * pi})
    for (double nz : {0.28, 0.33, 0.38, 0.43, 0.48}) {
      const SectionFixedPoint fp = find_section_fixed_point(kParams, kSectionEnergy, phi, nz, w.left_min, o);
      if (fp.converged) found.push_back(fp);
    }
  bool ok = false;
  std::string best = "none";
  double best_miss = 1e300;
  for (const SectionFixedPoint& fp : found) {
    const bool hit = fp.elliptic() && std::abs(fp.winding - kIslandRatio) <= kIslandRatioTol &&
                     std::abs(fp.n_z - kIslandNz) <= kIslandNzTol;
    ok = ok || hit;
    const double miss = std::abs(fp.winding - kIslandRatio);
    if (miss < best_miss) {
      best_miss = miss;
      best = "n_z " + fmt(fp.n_z, 4) + " phi " + fmt(fp.phi, 4) + " winding " + fmt(fp.winding, 4) +
             (fp.elliptic() ? " elliptic" : " hyperbolic");
    }
  }
  return {ok, std::to_string(found.size()) + " fixed points at E=" + fmt(kSectionEnergy) +
                  "; closest to ratio 4: " + best};
}

Outcome lyapunov_range()
{
  const double lam = shared.lambda();
  return {lam >= kLambdaLo && lam <= kLambdaHi, "chaotic median " + fmt(lam, 4) + " s^-1 (12 trials, tau=2000)"};
}

Outcome split_ordering()
{
  const double se = shared.exact_levels().splitting(0);
  const double sb = bo_levels(kParams, 0, true, 256, 4, 1e-6).splitting(0);
  const double ratio = sb / se;
  return {se < sb && ratio >= kSplitRatioLo && ratio <= kSplitRatioHi,
          "exact " + fmt(se, 6) + ", BO+gauge " + fmt(sb, 6) + ", ratio " + fmt(ratio, 4)};
}

Outcome magnetization_divergence()
{
  const double period = 2 * pi / shared.exact_levels().splitting(0);
  std::vector<double> taus;
  for (int i = 0; 0.05 * i <= 2 * period + 0.05; ++i) taus.push_back(0.05 * i);
  CompareOptions o;
  o.sampler.count = kCompareSamples;
  o.sampler.seed = derive_seed(kSeed, 2);
  o.classical.dtau = 2e-3;
  o.classical.energy_tolerance = 1e-6;
  const MagnetizationComparison m = compare_magnetization(kParams, taus, o);

  double crossing = -1.0, min_classical = 1e300;
  for (std::size_t i = 1; i < m.rows.size(); ++i) {
    if (crossing < 0.0 && m.rows[i].fz_quantum * m.rows[i - 1].fz_quantum <= 0.0) crossing = m.rows[i].tau;
    min_classical = std::min(min_classical, m.rows[i].fz_classical);
  }
  const double bound = break_time(shared.lambda(), 4.0);
  const double div_s = m.divergence_tau >= 0.0 ? units::tau_to_seconds(m.divergence_tau) : 1e300;
  const bool ok = crossing > 0.0 && crossing < period && min_classical > 0.0 && div_s < bound;
  return {ok, "quantum zero at tau " + fmt(crossing, 4) + " (period " + fmt(period, 4) + "); classical min " +
                  fmt(min_classical, 4) + " over 2 periods; divergence " + fmt(1e6 * div_s, 4) + " us < bound " +
                  fmt(1e6 * bound, 4) + " us"};
}

Outcome positivity_violation()
{
  const PositivityResult& r = shared.rho();
  const double lo = r.transported.min_eigenvalue();
  return {lo < -kViolationFactor * r.noise_floor, "snapshot tau " + fmt(r.snapshot_tau, 4) + ": min eigenvalue " +
                                                      fmt(lo, 4) + ", eps_rec " + fmt(r.noise_floor, 4) +
                                                      ", separation " + fmt(r.separation(), 4) +
                                                      ", residual " + fmt(r.transported.residual, 3) +
                                                      ", recovered mass " + fmt(r.transported.recovered_mass, 4)};
}

Outcome negative_kinetic_density()
{
  const PeriodicGrid g = PeriodicGrid::for_lattice(kParams, 256);
  const InitialState init = initial_state(kParams, g, Well::kLeft);
  EvolveOptions o;
  o.record_every = 25;
  const double tc = cat_time(evolve(kParams, init.psi, 1.5, o));
  if (tc < 0.0) return {false, "<F_z> has no zero crossing before tau 1.5"};
  o.record_every = 1 << 30;
  o.snapshot_times = {tc};
  const SpinorWavefunction psi = evolve(kParams, init.psi, tc, o).snapshots.back();
  const AdiabaticSpectrum sp = adiabatic_spectrum(kParams, build_spin_matrices(4), g);
  const KineticDensity k = kinetic_energy_density(psi, sp, observables(kParams, psi).energy);
  const double p1 = band_populations(psi, sp).total(0);
  const DoubleWell w = analyze_double_well(kParams);
  const auto run = k.negative_run_at(w.barrier_pos);
  const bool ok = run.first >= 0 && run.second > run.first && p1 > kLowestBandMass;
  const std::string where = run.first >= 0 ? "[" + fmt(g.x(run.first), 4) + ", " + fmt(g.x(run.second), 4) + "]"
                                           : "none";
  return {ok, "cat time " + fmt(tc, 4) + "; T < 0 on " + where + " around barrier " + fmt(w.barrier_pos, 4) +
                  "; lowest band mass " + fmt(p1, 5)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv)
{
  std::vector<int> expect_fail, only;
  CLI::App app{"Acceptance criteria"};
  app.add_option("--expect-fail", expect_fail, "criteria expected to fail")->delimiter(',');
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "spin algebra", 1, spin_algebra},
      {2, "pendulum reduction identity", 1, pendulum_identity},
      {3, "classical integrator invariants", 30, integrator_invariants},
      {4, "omega1 elliptic formula", 10, omega1_elliptic},
      {5, "quantum unitarity and Strang order", 60, quantum_unitarity},
      {6, "kinetic-density identity", 10, kinetic_identity},
      {7, "gauge monotonicity", 30, gauge_monotonicity},
      {8, "first-moment identity", 120, first_moment},
      {9, "rho-positivity control", 600, positivity_control},
      {10, "break-time formula", 1, break_time_formula},
      {11, "ratio-4 island chain", 600, island_chain},
      {12, "Lyapunov exponent", 300, lyapunov_range},
      {13, "spectral gap ordering", 300, split_ordering},
      {14, "magnetization divergence", 1200, magnetization_divergence},
      {15, "rho-positivity violation", 900, positivity_violation},
      {16, "negative kinetic energy density", 600, negative_kinetic_density},
  };
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  const std::set<int> selected(only.begin(), only.end());

  int unexpected = 0, passed = 0, ran = 0;
  for (const Criterion& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Shared results are charged to the first criterion that needs them.
    if (secs > c.budget_s) {
      r.pass = false;
      r.detail += "; over budget";
    }
    ++ran;
    passed += r.pass;
    const bool expect_pass = !expected.count(c.id);
    if (r.pass != expect_pass) ++unexpected;
    std::cout << (r.pass ? "PASS " : "FAIL ") << c.id << ": " << c.name << " | " << r.detail << " | "
              << fmt(secs, 3) << " s (budget " << c.budget_s << " s)" << (expect_pass ? "" : " [expected failure]")
              << std::endl;
  }
  std::cout << passed << "/" << ran << " criteria passed; " << unexpected << " unexpected outcome(s)" << std::endl;
  return unexpected == 0 ? 0 : 1;
}
