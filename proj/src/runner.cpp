#include "modw/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>
#include <json.hpp>
#include <openssl/crypto.h>
#include <openssl/evp.h>

#include "modw/adiabatic.hpp"
#include "modw/calibration.hpp"
#include "modw/csv.hpp"
#include "modw/errors.hpp"
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

namespace modw {

namespace fs = std::filesystem;
using namespace units;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

const std::vector<std::pair<Experiment, std::string>> kExperiments = {
    {Experiment::kSpectrum, "spectrum"},   {Experiment::kPoincare, "poincare"},
    {Experiment::kLyapunov, "lyapunov"},   {Experiment::kEvolve, "evolve"},
    {Experiment::kCompare, "compare"},     {Experiment::kRhoPositivity, "rho_positivity"},
    {Experiment::kKed, "ked"},             {Experiment::kResonances, "resonances"},
    {Experiment::kCalibrate, "calibrate"},
};

// Seed counters; one independent stream per consumer.
enum SeedStream : std::uint64_t { kSectionSeeds = 0, kLyapunovSeeds = 1, kSamplerSeeds = 2 };

std::string hex(const unsigned char* d, unsigned n)
{
  std::ostringstream os;
  for (unsigned i = 0; i < n; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(d[i]);
  return os.str();
}

std::string sha256_bytes(const char* data, std::size_t size)
{
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 || EVP_DigestUpdate(ctx, data, size) != 1 ||
      EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  return hex(md, len);
}

template <class T>
T in_range(const KeyValueConfig& cfg, const std::string& key, T fallback, T lo, T hi)
{
  T v;
  if constexpr (std::is_integral_v<T>)
    v = static_cast<T>(cfg.get_int(key, fallback));
  else
    v = cfg.get_double(key, fallback);
  if (v < lo || v > hi) {
    const auto it = cfg.entries().find(key);
    std::ostringstream os;
    os << (it != cfg.entries().end() && it->second.line > 0 ? "line " + std::to_string(it->second.line) + ": " : "")
       << "'" << key << "' = " << v << " outside [" << lo << ", " << hi << "]";
    throw ConfigError(os.str());
  }
  return v;
}

class Outputs {
 public:
  explicit Outputs(const std::string& dir) : dir_(dir) { fs::create_directories(dir); }

  CsvWriter csv(const std::string& name, const std::vector<std::string>& header)
  {
    files_.push_back(name);
    return CsvWriter((fs::path(dir_) / name).string(), header);
  }
  void text(const std::string& name, const std::string& body)
  {
    files_.push_back(name);
    std::ofstream((fs::path(dir_) / name).string()) << body;
  }
  const std::vector<std::string>& files() const { return files_; }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

IntegratorOptions classical_options(const RunConfig& c)
{
  IntegratorOptions o;
  o.dtau = c.dtau_classical;
  o.energy_tolerance = c.energy_tolerance;
  return o;
}

std::vector<double> tau_grid(double step, double span)
{
  std::vector<double> t;
  const long n = std::lround(span / step);
  for (long i = 0; i <= n; ++i) t.push_back(i * step);
  return t;
}

void summary_rows(CsvWriter& w, const std::vector<std::pair<std::string, double>>& rows)
{
  for (const auto& [k, v] : rows) w.row(k, {v});
}

void run_spectrum(const RunConfig& c, Outputs& out, json& info)
{
  const LatticeParams& p = c.params;
  const PeriodicGrid grid = PeriodicGrid::for_lattice(p, c.grid_n);
  const AdiabaticSpectrum spec = adiabatic_spectrum(p, build_spin_matrices(p.f_spin), grid);
  const Eigen::VectorXd phi = gauge_correction(spec, 0);
  std::vector<std::string> header{"zeta"};
  for (int m = 0; m < spec.dim(); ++m) header.push_back("V_" + std::to_string(m + 1));
  header.insert(header.end(), {"U_J", "b_fict", "Phi_1"});
  CsvWriter a = out.csv("adiabatic.csv", header);
  for (int i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid.x(i)};
    for (int m = 0; m < spec.dim(); ++m) row.push_back(spec.potentials(i, m));
    row.push_back(scalar_potential(p, grid.x(i)));
    row.push_back(fictitious_field(p, grid.x(i)));
    row.push_back(phi(i));
    a.row(row);
  }
  const EnergyLevels exact = full_hamiltonian_levels(p, c.n_basis, c.level_count);
  const EnergyLevels bo = bo_levels(p, 0, false, c.grid_n, c.level_count);
  const EnergyLevels bog = bo_levels(p, 0, true, c.grid_n, c.level_count);
  CsvWriter l = out.csv("levels.csv", {"index", "energy", "source"});
  for (const EnergyLevels* lv : {&exact, &bo, &bog})
    for (int i = 0; i < c.level_count; ++i)
      l.row({static_cast<double>(i), lv->values[static_cast<std::size_t>(i)]}, to_string(lv->source));
  const DoubleWell dw = analyze_double_well(p);
  CsvWriter s = out.csv("spectrum_summary.csv", {"quantity", "value"});
  summary_rows(s, {{"left_min", dw.left_min},
                   {"right_min", dw.right_min},
                   {"barrier", dw.barrier},
                   {"well_value", dw.left_value},
                   {"min_V2", band_minimum(p, 1)},
                   {"split_exact", exact.splitting()},
                   {"split_bo", bo.splitting()},
                   {"split_bo_gauge", bog.splitting()},
                   {"exact_convergence", exact.convergence}});
  info["split_exact"] = exact.splitting();
  info["split_bo_gauge"] = bog.splitting();
}

void run_poincare(const RunConfig& c, Outputs& out, json& info)
{
  SectionOptions o;
  o.seeds = c.section_seeds;
  o.tau_max = c.section_tau;
  o.rng_seed = derive_seed(c.seed, kSectionSeeds);
  o.integrator = classical_options(c);
  o.integrator.energy_tolerance = 0.0;
  CsvWriter w = out.csv("section.csv", {"phi", "n_z", "zeta", "tau", "seed_index"});
  for (const SectionPoint& s : poincare_section(c.params, c.energy, o))
    w.row({s.phi, s.n_z, s.zeta, s.tau, static_cast<double>(s.seed_index)});
  const DoubleWell dw = analyze_double_well(c.params);
  CsvWriter isl = out.csv("islands.csv", {"ratio", "phi", "n_z", "zeta", "return_time", "trace", "winding"});
  for (double r : {1.0, 2.0, 3.0, 4.0})
    for (const SectionFixedPoint& fp : resonant_island_centres(c.params, c.energy, r, dw.left_min, o.integrator))
      isl.row({r, fp.phi, fp.n_z, fp.zeta, fp.return_time, fp.trace, fp.winding});
  info["section_rng_seed"] = o.rng_seed;
}

double prepared_energy(const RunConfig& c)
{
  const PeriodicGrid grid = PeriodicGrid::for_lattice(c.params, c.grid_n);
  return initial_state(c.params, grid, Well::kLeft).energy;
}

void run_lyapunov(const RunConfig& c, Outputs& out, json& info)
{
  const double energy = c.lyapunov_energy != 0.0 ? c.lyapunov_energy : prepared_energy(c);
  LyapunovOptions o;
  o.tau_total = c.lyapunov_tau;
  o.integrator = classical_options(c);
  o.integrator.energy_tolerance = 0.0;
  const std::uint64_t seed = derive_seed(c.seed, kLyapunovSeeds);
  const ShellLyapunovSurvey s = lyapunov_survey(c.params, energy, c.lyapunov_trials, seed, o);
  CsvWriter w = out.csv("lyapunov.csv", {"trial", "zeta", "p", "theta", "phi", "exponent", "per_second", "converged"});
  for (std::size_t i = 0; i < s.results.size(); ++i) {
    const ClassicalState& st = s.states[i];
    const LyapunovResult& r = s.results[i];
    w.row({static_cast<double>(i), st.zeta, st.p, st.theta(), st.phi(), r.exponent, r.per_second,
           r.converged ? 1.0 : 0.0});
  }
  CsvWriter tr = out.csv("lyapunov_trace.csv", {"trial", "tau", "lambda_running"});
  for (std::size_t i = 0; i < s.results.size(); ++i)
    for (std::size_t j = 0; j < s.results[i].times.size(); ++j)
      tr.row({static_cast<double>(i), s.results[i].times[j], s.results[i].running[j]});
  const double lam = rate_to_per_second(s.chaotic_median);
  CsvWriter m = out.csv("lyapunov_summary.csv", {"quantity", "value"});
  std::vector<std::pair<std::string, double>> rows{{"energy", energy},
                                                   {"chaotic_count", static_cast<double>(s.chaotic_count)},
                                                   {"chaotic_median_per_tau", s.chaotic_median},
                                                   {"chaotic_median_per_second", lam}};
  if (lam > 0.0) rows.push_back({"break_time_us", 1e6 * break_time(lam, c.params.f_spin)});
  summary_rows(m, rows);
  info["lyapunov_seed"] = seed;
  info["energy"] = energy;
}

void run_evolve(const RunConfig& c, Outputs& out, json& info)
{
  const PeriodicGrid grid = PeriodicGrid::for_lattice(c.params, c.grid_n);
  const InitialState init = initial_state(c.params, grid, Well::kLeft);
  EvolveOptions o;
  o.dtau = c.dtau_quantum;
  o.record_every = std::max(1, static_cast<int>(std::lround(c.tau_step / c.dtau_quantum)));
  o.energy_tolerance = c.energy_tolerance;
  const QuantumTrajectory tr = evolve(c.params, init.psi, c.tau_max, o);
  CsvWriter w = out.csv("evolve.csv", {"tau", "fz", "energy", "norm", "t_us"});
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    w.row({tr.times[i], tr.fz[i], tr.energy[i], tr.norm[i], 1e6 * tau_to_seconds(tr.times[i])});
  const double tc = cat_time(tr);
  CsvWriter s = out.csv("evolve_summary.csv", {"quantity", "value"});
  summary_rows(s, {{"energy", init.energy},
                   {"barrier", init.barrier},
                   {"min_V2", init.min_v2},
                   {"frame_center", init.fit.center},
                   {"frame_omega", init.fit.omega},
                   {"cat_tau", tc},
                   {"cat_us", tc > 0.0 ? 1e6 * tau_to_seconds(tc) : -1.0},
                   {"max_norm_drift", tr.max_norm_drift()},
                   {"max_energy_drift", tr.max_relative_energy_drift()}});
  info["frame"] = {{"center", init.fit.center}, {"omega", init.fit.omega}};
}

void run_compare(const RunConfig& c, Outputs& out, json& info)
{
  CompareOptions o;
  o.grid_n = c.grid_n;
  o.sampler.count = c.ensemble_size;
  o.sampler.seed = derive_seed(c.seed, kSamplerSeeds);
  o.quantum.dtau = c.dtau_quantum;
  o.classical = classical_options(c);
  o.classical.dtau = std::max(c.dtau_classical, 2e-3);
  o.classical.energy_tolerance = std::max(c.energy_tolerance, 1e-6);
  const MagnetizationComparison m = compare_magnetization(c.params, tau_grid(c.tau_step, c.tau_max), o);
  CsvWriter w = out.csv("compare.csv", {"tau", "fz_q", "fz_c", "err"});
  for (const MagnetizationRow& r : m.rows) w.row({r.tau, r.fz_quantum, r.fz_classical, r.mc_error});
  CsvWriter e = out.csv("ensemble.csv", {"zeta", "p", "theta", "phi"});
  for (const ClassicalState& s : m.initial.samples) e.row({s.zeta, s.p, s.theta(), s.phi()});
  CsvWriter s = out.csv("compare_summary.csv", {"quantity", "value"});
  summary_rows(s, {{"divergence_tau", m.divergence_tau},
                   {"divergence_us", m.divergence_tau >= 0.0 ? 1e6 * tau_to_seconds(m.divergence_tau) : -1.0},
                   {"sign", m.sign},
                   {"acceptance", m.initial.acceptance},
                   {"thinning", static_cast<double>(m.initial.thinning)},
                   {"burn_in", static_cast<double>(m.initial.burn_in)},
                   {"frame_center", m.fit.center},
                   {"frame_omega", m.fit.omega}});
  info["sampler_seed"] = o.sampler.seed;
  info["frame"] = {{"center", m.fit.center}, {"omega", m.fit.omega}};
}

void run_rho_positivity(const RunConfig& c, Outputs& out, json& info)
{
  PositivityOptions o;
  o.grid_n = c.grid_n;
  o.reconstruction.n_max = c.n_max;
  o.reconstruction.regularization = c.regularization;
  o.quantum.dtau = c.dtau_quantum;
  o.snapshot_tau = c.snapshot_tau;
  const PositivityResult r = rho_positivity_test(c.params, o);
  CsvWriter w = out.csv("controls.csv", {"state", "min_eigenvalue", "fidelity", "residual"});
  for (const ControlResult& k : r.controls) w.row(k.label, {k.min_eigenvalue, k.fidelity, k.residual});
  CsvWriter e = out.csv("eigenvalues.csv", {"index", "eigenvalue"});
  for (Eigen::Index i = 0; i < r.transported.eigenvalues.size(); ++i)
    e.row({static_cast<double>(i), r.transported.eigenvalues(i)});
  CsvWriter s = out.csv("rho_summary.csv", {"quantity", "value"});
  summary_rows(s, {{"eps_rec", r.noise_floor},
                   {"min_fidelity", r.min_fidelity},
                   {"snapshot_tau", r.snapshot_tau},
                   {"snapshot_us", 1e6 * tau_to_seconds(r.snapshot_tau)},
                   {"min_eigenvalue", r.transported.min_eigenvalue()},
                   {"separation", r.separation()},
                   {"residual", r.transported.residual},
                   {"ensemble_size", static_cast<double>(r.ensemble_size)},
                   {"frame_center", r.frame.center()},
                   {"frame_omega", r.frame.omega()}});
  info["frame"] = {{"center", r.frame.center()}, {"omega", r.frame.omega()}};
}

void run_ked(const RunConfig& c, Outputs& out, json& info)
{
  const PeriodicGrid grid = PeriodicGrid::for_lattice(c.params, c.grid_n);
  const InitialState init = initial_state(c.params, grid, Well::kLeft);
  EvolveOptions o;
  o.dtau = c.dtau_quantum;
  double tau = c.snapshot_tau;
  if (tau < 0.0) {
    o.record_every = 25;
    tau = cat_time(evolve(c.params, init.psi, 1.5, o));
    if (tau < 0.0) throw NumericalError("<F_z> does not change sign; no cat time");
  }
  o.record_every = 1 << 30;
  o.snapshot_times = {tau};
  const SpinorWavefunction psi = evolve(c.params, init.psi, tau, o).snapshots.back();
  const AdiabaticSpectrum spec = adiabatic_spectrum(c.params, build_spin_matrices(c.params.f_spin), grid);
  const Observables obs = SpinorHamiltonian(c.params, grid).expectation(psi);
  const KineticDensity k = kinetic_energy_density(psi, spec, obs.energy);
  std::vector<std::string> header{"zeta", "psi2", "T"};
  for (int m = 0; m < spec.dim(); ++m) header.push_back("P_" + std::to_string(m + 1));
  CsvWriter w = out.csv("ked.csv", header);
  const Eigen::VectorXd rho = psi.density();
  for (int i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid.x(i), rho(i), k.t_of_z(i)};
    for (int m = 0; m < spec.dim(); ++m) row.push_back(k.populations(i, m));
    w.row(row);
  }
  const auto run = k.negative_run_at(0.0);
  const BandPopulations bp = band_populations(psi, spec);
  CsvWriter s = out.csv("ked_summary.csv", {"quantity", "value"});
  summary_rows(s, {{"tau", tau},
                   {"t_us", 1e6 * tau_to_seconds(tau)},
                   {"mean_energy", obs.energy},
                   {"P_1", bp.total(0)},
                   {"P_2", bp.total(1)},
                   {"integral_T", k.integral},
                   {"kinetic", obs.kinetic},
                   {"barrier_run_lo", run.first >= 0 ? grid.x(run.first) : 0.0},
                   {"barrier_run_hi", run.second >= 0 ? grid.x(run.second) : 0.0}});
  info["tau"] = tau;
}

void run_resonances(const RunConfig& c, Outputs& out, json&)
{
  const DoubleWell dw = analyze_double_well(c.params);
  const std::vector<double> ratios{1.0, 1.5, 2.0, 3.0, 4.0, 5.0};
  CsvWriter w = out.csv("resonances.csv", {"ratio", "alpha", "spans_barrier"});
  for (const ResonanceHit& h : resonance_scan_alpha(c.params, c.energy, 0.0, std::numbers::pi, ratios, dw.left_min))
    w.row({h.ratio, h.coordinate, h.spans_barrier ? 1.0 : 0.0});
  CsvWriter f = out.csv("frequencies.csv", {"alpha", "omega1", "omega2", "ratio", "spans_barrier"});
  for (int i = 0; i <= 400; ++i) {
    const double a = std::numbers::pi * i / 400;
    try {
      const SurfaceOrbit o = adiabatic_orbit(c.params, a, c.energy, dw.left_min);
      f.row({a, o.freq.omega1, o.freq.omega2, o.freq.ratio(), o.spans_barrier ? 1.0 : 0.0});
    } catch (const DomainError&) {
    }
  }
}

void run_calibrate(const RunConfig& c, Outputs& out, json& info)
{
  CalibrationTargets t;
  t.barrier_lo = c.barrier_lo;
  t.barrier_hi = c.barrier_hi;
  t.n_basis = c.n_basis;
  const double deg = std::numbers::pi / 180.0;
  const SearchRange u0{c.u0_lo, c.u0_hi, c.u0_steps};
  const SearchRange th{c.theta_lo_deg * deg, c.theta_hi_deg * deg, c.theta_steps};
  const SearchRange bx{c.bx_lo, c.bx_hi, c.bx_steps};
  const CalibrationResult r = calibrate(c.params, u0, th, bx, t);
  out.text("calibration_report.txt", r.report);
  CsvWriter w = out.csv("calibration.csv",
                        {"u0", "theta_l_deg", "bx", "barrier", "split_exact", "split_bo_gauge", "score", "feasible"});
  const CalibrationCandidate& b = r.best;
  w.row({b.params.u0, b.params.theta_l / deg, b.params.bx, b.barrier, b.split_exact, b.split_bo_gauge, b.score,
         r.feasible ? 1.0 : 0.0});
  std::ostringstream cfg;
  cfg.precision(17);
  cfg << "u0 = " << b.params.u0 << "\ntheta_l_deg = " << b.params.theta_l / deg << "\nbx = " << b.params.bx << '\n';
  out.text("calibrated.cfg", cfg.str());
  info["feasible"] = r.feasible;
  info["evaluated"] = r.evaluated;
}

}  // namespace

std::string to_string(Experiment e)
{
  for (const auto& [k, v] : kExperiments)
    if (k == e) return v;
  return "unknown";
}

Experiment parse_experiment(const std::string& name)
{
  for (const auto& [k, v] : kExperiments)
    if (v == name) return k;
  std::string known;
  for (const auto& [k, v] : kExperiments) known += (known.empty() ? "" : ", ") + v;
  throw ConfigError("unknown experiment '" + name + "' (expected one of: " + known + ")");
}

std::vector<std::string> run_config_keys()
{
  return {"u0",           "theta_l_deg",     "bx",            "f_spin",        "n_periods",     "experiment",
          "seed",         "out_dir",         "grid_n",        "dtau_quantum",  "dtau_classical", "tau_max",
          "tau_step",     "ensemble_size",   "n_max",         "regularization", "snapshot_tau", "energy",
          "section_seeds", "section_tau",    "lyapunov_energy", "lyapunov_trials", "lyapunov_tau", "n_basis",
          "level_count",  "energy_tolerance", "u0_lo",        "u0_hi",         "u0_steps",      "theta_lo_deg",
          "theta_hi_deg", "theta_steps",     "bx_lo",         "bx_hi",         "bx_steps",      "barrier_lo",
          "barrier_hi"};
}

RunConfig load_run_config(const KeyValueConfig& file, const std::optional<std::string>& experiment,
                          const std::optional<std::uint64_t>& seed, const std::optional<std::string>& out_dir)
{
  KeyValueConfig cfg = file;
  cfg.reject_unknown(run_config_keys());
  if (experiment) cfg.set("experiment", *experiment);
  if (seed) cfg.set("seed", std::to_string(*seed));
  if (out_dir) cfg.set("out_dir", *out_dir);
  cfg.require({"experiment"});

  RunConfig c;
  c.params = params_from_config(cfg);
  c.experiment = parse_experiment(cfg.get_string("experiment"));
  const std::string seed_text = cfg.get_string("seed", "1");
  try {
    std::size_t used = 0;
    c.seed = std::stoull(seed_text, &used);
    if (used != seed_text.size() || seed_text.front() == '-') throw std::invalid_argument("seed");
  } catch (const std::exception&) {
    throw ConfigError("'seed' = '" + seed_text + "' is not an unsigned 64-bit integer");
  }
  c.out_dir = cfg.get_string("out_dir", c.out_dir);

  c.grid_n = in_range(cfg, "grid_n", c.grid_n, 32, 8192);
  if (c.grid_n % 2) throw ConfigError("'grid_n' must be even");
  c.dtau_quantum = in_range(cfg, "dtau_quantum", c.dtau_quantum, 1e-7, 1e-3);
  c.dtau_classical = in_range(cfg, "dtau_classical", c.dtau_classical, 1e-5, 1e-2);
  c.tau_max = in_range(cfg, "tau_max", c.tau_max, 1e-3, 1e3);
  c.tau_step = in_range(cfg, "tau_step", c.tau_step, 1e-4, 10.0);
  c.ensemble_size = in_range(cfg, "ensemble_size", c.ensemble_size, 100, 10000000);
  c.n_max = in_range(cfg, "n_max", c.n_max, 1, 120);
  c.regularization = in_range(cfg, "regularization", c.regularization, 1e-12, 1.0);
  c.snapshot_tau = in_range(cfg, "snapshot_tau", c.snapshot_tau, -1.0, 1e3);
  c.energy = in_range(cfg, "energy", c.energy, -1e5, 1e5);
  c.section_seeds = in_range(cfg, "section_seeds", c.section_seeds, 1, 10000);
  c.section_tau = in_range(cfg, "section_tau", c.section_tau, 1e-2, 1e5);
  c.lyapunov_energy = in_range(cfg, "lyapunov_energy", c.lyapunov_energy, -1e5, 1e5);
  c.lyapunov_trials = in_range(cfg, "lyapunov_trials", c.lyapunov_trials, 1, 10000);
  c.lyapunov_tau = in_range(cfg, "lyapunov_tau", c.lyapunov_tau, 1.0, 1e6);
  c.n_basis = in_range(cfg, "n_basis", c.n_basis, 8, 1024);
  c.level_count = in_range(cfg, "level_count", c.level_count, 2, 64);
  c.energy_tolerance = in_range(cfg, "energy_tolerance", c.energy_tolerance, 0.0, 1.0);

  c.u0_lo = cfg.get_double("u0_lo", c.params.u0);
  c.u0_hi = cfg.get_double("u0_hi", c.u0_lo);
  c.u0_steps = in_range(cfg, "u0_steps", c.u0_steps, 1, 1000);
  const double deg = 180.0 / std::numbers::pi;
  c.theta_lo_deg = cfg.get_double("theta_lo_deg", c.params.theta_l * deg);
  c.theta_hi_deg = cfg.get_double("theta_hi_deg", c.theta_lo_deg);
  c.theta_steps = in_range(cfg, "theta_steps", c.theta_steps, 1, 1000);
  c.bx_lo = cfg.get_double("bx_lo", c.params.bx);
  c.bx_hi = cfg.get_double("bx_hi", c.bx_lo);
  c.bx_steps = in_range(cfg, "bx_steps", c.bx_steps, 1, 1000);
  c.barrier_lo = cfg.get_double("barrier_lo", c.barrier_lo);
  c.barrier_hi = cfg.get_double("barrier_hi", c.barrier_hi);
  if (c.u0_hi < c.u0_lo || c.theta_hi_deg < c.theta_lo_deg || c.bx_hi < c.bx_lo || c.barrier_hi < c.barrier_lo)
    throw ConfigError("calibration ranges must satisfy lo <= hi");

  std::ostringstream canon;
  for (const auto& [k, e] : cfg.entries())
    if (k != "out_dir") canon << k << " = " << e.value << '\n';
  c.canonical = canon.str();
  return c;
}

std::string sha256_string(const std::string& data) { return sha256_bytes(data.data(), data.size()); }

std::string sha256_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_string(ss.str());
}

RunSummary run(const RunConfig& c)
{
  const auto t0 = std::chrono::steady_clock::now();
  Outputs out(c.out_dir);
  json info = json::object();
  std::exception_ptr failure;
  try {
    switch (c.experiment) {
      case Experiment::kSpectrum: run_spectrum(c, out, info); break;
      case Experiment::kPoincare: run_poincare(c, out, info); break;
      case Experiment::kLyapunov: run_lyapunov(c, out, info); break;
      case Experiment::kEvolve: run_evolve(c, out, info); break;
      case Experiment::kCompare: run_compare(c, out, info); break;
      case Experiment::kRhoPositivity: run_rho_positivity(c, out, info); break;
      case Experiment::kKed: run_ked(c, out, info); break;
      case Experiment::kResonances: run_resonances(c, out, info); break;
      case Experiment::kCalibrate: run_calibrate(c, out, info); break;
    }
  } catch (...) {
    failure = std::current_exception();
  }
  if (!failure && c.experiment == Experiment::kCalibrate && !info.value("feasible", false))
    failure = std::make_exception_ptr(CalibrationError("no candidate meets the barrier and splitting windows; "
                                                       "nearest miss in calibration.csv"));

  RunSummary s;
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.files = out.files();
  json files = json::array();
  for (const std::string& f : s.files) {
    const fs::path path = fs::path(c.out_dir) / f;
    files.push_back({{"path", f}, {"sha256", sha256_file(path.string())}, {"bytes", fs::file_size(path)}});
  }
  json m;
  m["program"] = "modw";
  m["version"] = kVersion;
  m["experiment"] = to_string(c.experiment);
  m["status"] = failure ? "failed" : "ok";
  m["config"] = c.canonical;
  m["config_sha256"] = sha256_string(c.canonical);
  m["seed"] = c.seed;
  m["seed_scheme"] = "derive_seed(seed, k): SplitMix64 of seed + (k+1)*0x9E3779B97F4A7C15; "
                     "k = 0 section, 1 lyapunov, 2 sampler";
  m["libraries"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)},
                    {"fftw", std::string(fftw_version)},
                    {"boost", std::string(BOOST_LIB_VERSION)},
                    {"openssl", std::string(OpenSSL_version(OPENSSL_VERSION))}};
  m["details"] = info;
  m["wall_seconds"] = s.wall_seconds;
  m["files"] = files;
  s.manifest = (fs::path(c.out_dir) / "manifest.json").string();
  std::ofstream(s.manifest) << m.dump(2) << '\n';
  if (failure) std::rethrow_exception(failure);
  return s;
}

std::vector<std::string> verify_manifest(const std::string& manifest_path)
{
  std::ifstream in(manifest_path);
  if (!in) throw ConfigError("cannot open manifest '" + manifest_path + "'");
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw ConfigError("manifest '" + manifest_path + "' is not valid JSON: " + e.what());
  }
  const fs::path dir = fs::path(manifest_path).parent_path();
  std::vector<std::string> bad;
  for (const auto& f : m.at("files")) {
    const std::string rel = f.at("path").get<std::string>();
    const fs::path p = dir / rel;
    if (!fs::exists(p) || sha256_file(p.string()) != f.at("sha256").get<std::string>()) bad.push_back(rel);
  }
  return bad;
}

}  // namespace modw
