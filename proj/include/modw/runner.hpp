#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modw/params.hpp"

namespace modw {

enum class Experiment { kSpectrum, kPoincare, kLyapunov, kEvolve, kCompare, kRhoPositivity, kKed, kResonances, kCalibrate };

std::string to_string(Experiment e);
/// Throws ConfigError for unknown names.
Experiment parse_experiment(const std::string& name);

/// Resolved run configuration. Every key of the config file maps to one field;
/// unknown keys are rejected with their line number.
struct RunConfig {
  LatticeParams params;
  Experiment experiment = Experiment::kSpectrum;
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  int grid_n = 256;
  double dtau_quantum = 2e-5;
  double dtau_classical = 1e-3;
  double tau_max = 8.0;         ///< evolve / compare span
  double tau_step = 0.05;       ///< compare / evolve output spacing
  int ensemble_size = 10000;
  int n_max = 48;
  double regularization = 1e-6;
  double snapshot_tau = -1.0;   ///< rho_positivity transport time; negative = cat time
  double energy = -186.8;       ///< poincare / resonances shell energy
  int section_seeds = 24;
  double section_tau = 100.0;
  double lyapunov_energy = 0.0; ///< zero: mean energy of the prepared state
  int lyapunov_trials = 12;
  double lyapunov_tau = 2000.0;
  int n_basis = 64;
  int level_count = 8;
  double energy_tolerance = 1e-8;

  // calibrate
  double u0_lo = 0.0, u0_hi = 0.0;
  int u0_steps = 1;
  double theta_lo_deg = 0.0, theta_hi_deg = 0.0;
  int theta_steps = 1;
  double bx_lo = 0.0, bx_hi = 0.0;
  int bx_steps = 1;
  double barrier_lo = -192.0, barrier_hi = -186.0;

  /// Canonical `key = value` text of the resolved configuration (sorted keys).
  std::string canonical;
};

std::vector<std::string> run_config_keys();

/// Parses and range-checks a configuration; `experiment` and `seed`, when given,
/// override the file. Throws ConfigError.
RunConfig load_run_config(const KeyValueConfig& cfg, const std::optional<std::string>& experiment = {},
                          const std::optional<std::uint64_t>& seed = {},
                          const std::optional<std::string>& out_dir = {});

struct RunSummary {
  std::vector<std::string> files;  ///< relative to out_dir
  std::string manifest;            ///< path of manifest.json
  double wall_seconds = 0.0;
};

/// Runs the experiment, writes its CSV files and manifest.json into out_dir.
/// Module errors propagate (ConfigError, NumericalError and subclasses).
RunSummary run(const RunConfig& config);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);
std::string sha256_string(const std::string& data);

/// Re-hashes every file listed in a manifest; returns the paths whose hash differs
/// or that are missing.
std::vector<std::string> verify_manifest(const std::string& manifest_path);

}  // namespace modw
