// Experiment runner. Exit codes: 0 ok, 1 verification mismatch, 2 configuration
// error, 3 numerical error.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "modw/errors.hpp"
#include "modw/runner.hpp"

int main(int argc, char** argv)
{
  CLI::App app{"Spin-motion dynamics in a magneto-optical double-well lattice"};
  std::string config_path;
  std::optional<std::string> experiment;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::string verify;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--experiment", experiment,
                 "spectrum | poincare | lyapunov | evolve | compare | rho_positivity | ked | resonances | calibrate");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--verify", verify, "re-hash the files listed in a manifest.json and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!verify.empty()) {
      const auto bad = modw::verify_manifest(verify);
      for (const auto& f : bad) std::cerr << "hash mismatch: " << f << '\n';
      std::cout << (bad.empty() ? "manifest verified\n" : "manifest verification failed\n");
      return bad.empty() ? 0 : 1;
    }
    if (config_path.empty()) throw modw::ConfigError("--config is required");
    const modw::RunConfig cfg =
        modw::load_run_config(modw::KeyValueConfig::load(config_path), experiment, seed, out_dir);
    const modw::RunSummary s = modw::run(cfg);
    for (const auto& f : s.files) std::cout << cfg.out_dir << '/' << f << '\n';
    std::cout << s.manifest << '\n';
    return 0;
  } catch (const modw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const modw::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
