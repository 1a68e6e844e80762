#include "modw/params.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "modw/errors.hpp"

namespace modw {

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& key, int line)
{
  std::ostringstream os;
  os << "key '" << key << "'";
  if (line > 0) os << " (line " << line << ")";
  return os.str();
}

}  // namespace

void LatticeParams::validate_allow_free() const
{
  if (!std::isfinite(u0) || !std::isfinite(theta_l) || !std::isfinite(bx))
    throw ConfigError("lattice parameters must be finite");
  if (!(theta_l > 0.0 && theta_l < std::numbers::pi))
    throw ConfigError("theta_l must lie strictly inside (0, pi)");
  if (bx < 0.0) throw ConfigError("bx must be non-negative");
  if (f_spin < 1) throw ConfigError("f_spin must be >= 1");
  if (n_periods < 1) throw ConfigError("n_periods must be >= 1");
}

void LatticeParams::validate() const
{
  validate_allow_free();
  if (u0 == 0.0) throw ConfigError("u0 must be non-zero");
}

double LatticeParams::domain_length() const { return n_periods * std::numbers::pi; }

LatticeParams default_params()
{
  LatticeParams p;
  p.u0 = -149.36817;
  p.theta_l = 71.51087 * std::numbers::pi / 180.0;
  p.bx = 94.26334;
  p.f_spin = 4;
  p.n_periods = 1;
  return p;
}

KeyValueConfig KeyValueConfig::parse(std::istream& in)
{
  KeyValueConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
    if (value.empty()) throw ConfigError("line " + std::to_string(line) + ": empty value for '" + key + "'");
    if (cfg.entries_.count(key))
      throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "' (first on line " +
                        std::to_string(cfg.entries_[key].line) + ")");
    cfg.entries_[key] = ConfigEntry{value, line};
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text)
{
  std::istringstream in(text);
  return parse(in);
}

KeyValueConfig KeyValueConfig::load(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

void KeyValueConfig::set(const std::string& key, const std::string& value)
{
  auto it = entries_.find(key);
  entries_[key] = ConfigEntry{value, it == entries_.end() ? 0 : it->second.line};
}

double KeyValueConfig::get_double(const std::string& key) const
{
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  const std::string& v = it->second.value;
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(x))
    throw ConfigError(where(key, it->second.line) + ": '" + v + "' is not a finite number");
  return x;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const
{
  return has(key) ? get_double(key) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key) const
{
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  const std::string& v = it->second.value;
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw ConfigError(where(key, it->second.line) + ": '" + v + "' is not an integer");
  return x;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const
{
  return has(key) ? get_int(key) : fallback;
}

std::string KeyValueConfig::get_string(const std::string& key) const
{
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second.value;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const
{
  return has(key) ? get_string(key) : fallback;
}

void KeyValueConfig::reject_unknown(const std::vector<std::string>& allowed) const
{
  for (const auto& [key, entry] : entries_) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) throw ConfigError(where(key, entry.line) + ": unknown key");
  }
}

void KeyValueConfig::require(const std::vector<std::string>& keys) const
{
  for (const auto& k : keys)
    if (!has(k)) throw ConfigError("missing required key '" + k + "'");
}

LatticeParams params_from_config(const KeyValueConfig& cfg)
{
  cfg.require({"u0", "theta_l_deg", "bx"});
  LatticeParams p;
  p.u0 = cfg.get_double("u0");
  p.theta_l = cfg.get_double("theta_l_deg") * std::numbers::pi / 180.0;
  p.bx = cfg.get_double("bx");
  p.f_spin = static_cast<int>(cfg.get_int("f_spin", 4));
  p.n_periods = static_cast<int>(cfg.get_int("n_periods", 1));
  try {
    p.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("invalid lattice parameters: ") + e.what());
  }
  return p;
}

}  // namespace modw
