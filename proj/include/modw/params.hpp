#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace modw {

/// Physical configuration of the lattice, in recoil units.
struct LatticeParams {
  double u0 = 0.0;       ///< lattice depth U0 [E_R], signed, non-zero
  double theta_l = 0.0;  ///< relative polarization angle [rad], in (0, pi)
  double bx = 0.0;       ///< transverse field mu_B * B_x [E_R], >= 0
  int f_spin = 4;        ///< total angular momentum F
  int n_periods = 1;     ///< lattice periods (length pi each) in the domain

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  /// Same as validate() but allows u0 == 0 (free-particle and pure-field checks).
  void validate_allow_free() const;

  double domain_length() const;
  int spin_dim() const { return 2 * f_spin + 1; }
};

/// Calibrated default triple (see README): double-well lowest adiabatic potential
/// with its inner barrier at -189 E_R, exact ground-doublet splitting 1.7 E_R.
LatticeParams default_params();

/// One `key = value` entry with its 1-based source line.
struct ConfigEntry {
  std::string value;
  int line = 0;
};

/// Parsed `key = value` text. Blank lines and `#` comments are ignored.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig parse_string(const std::string& text);
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, ConfigEntry>& entries() const { return entries_; }

  void set(const std::string& key, const std::string& value);

  /// Typed accessors; throw ConfigError naming key and line on bad values.
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  /// Throws ConfigError for the first key not in `allowed`.
  void reject_unknown(const std::vector<std::string>& allowed) const;
  /// Throws ConfigError naming the first missing key.
  void require(const std::vector<std::string>& keys) const;

 private:
  std::map<std::string, ConfigEntry> entries_;
};

/// Reads u0, theta_l_deg, bx (required) and f_spin, n_periods (optional).
LatticeParams params_from_config(const KeyValueConfig& cfg);

}  // namespace modw
