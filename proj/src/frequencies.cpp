#include "modw/frequencies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "modw/errors.hpp"
#include "modw/potential.hpp"

namespace modw {

namespace {

constexpr double kPi = std::numbers::pi;

double elliptic_modulus(double abs_c, double energy)
{
  const double k2 = 0.5 * (1.0 + energy / abs_c);
  if (!(k2 > 0.0)) throw DomainError("pendulum energy below the well bottom");
  if (!(k2 < 1.0)) throw DomainError("pendulum energy above the separatrix (rotation, kappa >= 1)");
  return std::sqrt(k2);
}

double libration_frequency(double abs_c, double energy)
{
  const double k = elliptic_modulus(abs_c, energy);
  return 0.5 * kPi * std::sqrt(8.0 * abs_c) / std::comp_ellint_1(k);
}

// Energy with the given action at amplitude abs_c (Newton, dJ/dE = 1/omega1).
double energy_at_action(double abs_c, double action, double guess)
{
  double e = std::clamp(guess, -abs_c * (1.0 - 1e-12), abs_c * (1.0 - 1e-12));
  for (int it = 0; it < 100; ++it) {
    const double de = (pendulum_action(abs_c, e) - action) * libration_frequency(abs_c, e);
    double next = e - de;
    next = std::clamp(next, -abs_c * (1.0 - 1e-14), abs_c * (1.0 - 1e-14));
    if (std::abs(next - e) < 1e-14 * std::max(1.0, abs_c)) return next;
    e = next;
  }
  return e;
}

double amplitude(const LatticeParams& p, double nz) { return std::abs(pendulum_form(p, nz).amplitude); }

// Turning point between zeta_in (V < E) and the first zeta beyond it with V >= E.
template <class V>
double turning_point(V&& v, double energy, double zeta_in, double direction, double limit)
{
  const double dz = 1e-3;
  double a = zeta_in;
  double b = zeta_in;
  for (;;) {
    b = a + direction * dz;
    if (direction * (b - limit) > 0.0) throw DomainError("no bounded orbit: turning point beyond the domain");
    if (v(b) >= energy) break;
    a = b;
  }
  for (int it = 0; it < 200 && std::abs(b - a) > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    if (v(m) < energy) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

double pendulum_action(double abs_c, double energy)
{
  const double k = elliptic_modulus(abs_c, energy);
  const double kk = std::comp_ellint_1(k);
  const double ee = std::comp_ellint_2(k);
  return 2.0 * std::sqrt(2.0 * abs_c) / kPi * (ee - (1.0 - k * k) * kk);
}

PendulumFrequencies pendulum_action_angle(const LatticeParams& params, double n_z, double energy)
{
  if (params.bx != 0.0) throw DomainError("pendulum reduction requires b_x = 0");
  if (std::abs(n_z) > 1.0) throw DomainError("|n_z| must not exceed 1");
  const double a = amplitude(params, n_z);
  PendulumFrequencies out;
  out.modulus = elliptic_modulus(a, energy);
  out.omega0 = std::sqrt(8.0 * a);
  out.freq.omega1 = libration_frequency(a, energy);
  out.action = pendulum_action(a, energy);

  // omega2 = dH0/d(F n_z) at fixed J.
  const double d = 1e-4;
  const double lo = std::max(-1.0, n_z - d);
  const double hi = std::min(1.0, n_z + d);
  const double e_hi = energy_at_action(amplitude(params, hi), out.action, energy);
  const double e_lo = energy_at_action(amplitude(params, lo), out.action, energy);
  out.freq.omega2 = (e_hi - e_lo) / ((hi - lo) * params.f_spin);
  return out;
}

double adiabatic_surface(const LatticeParams& params, double alpha, double zeta)
{
  return scalar_potential(params, zeta) - effective_field(params, zeta).norm() * std::cos(alpha);
}

SurfaceOrbit adiabatic_orbit(const LatticeParams& params, double alpha, double energy, double zeta_start)
{
  auto v = [&](double z) { return adiabatic_surface(params, alpha, z); };
  if (!(v(zeta_start) < energy)) {
    std::ostringstream os;
    os << "energy " << energy << " below the alpha surface at zeta = " << zeta_start;
    throw DomainError(os.str());
  }
  const double half = 0.5 * params.domain_length();
  SurfaceOrbit o;
  o.left = turning_point(v, energy, zeta_start, -1.0, zeta_start - half);
  o.right = turning_point(v, energy, zeta_start, +1.0, zeta_start + half);
  o.spans_barrier = o.left < 0.0 && o.right > 0.0;

  // zeta = mid + hw sin(s) removes the inverse-square-root endpoint singularities.
  const double mid = 0.5 * (o.left + o.right);
  const double hw = 0.5 * (o.right - o.left);
  auto speed_inv = [&](double s) {
    const double z = mid + hw * std::sin(s);
    const double ke = energy - v(z);
    if (!(ke > 0.0)) {
      // At the end points use the local linearisation of E - V.
      const double c = std::cos(s);
      const double zt = s < 0.0 ? o.left : o.right;
      const double h = 1e-7;
      const double slope = std::abs(v(zt + h) - v(zt - h)) / (2.0 * h);
      return c == 0.0 ? std::sqrt(2.0 * hw / slope) : hw * c / std::sqrt(slope * hw * (1.0 - std::abs(std::sin(s))));
    }
    return hw * std::cos(s) / std::sqrt(ke);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double t_half = GK::integrate(speed_inv, -0.5 * kPi, 0.5 * kPi, 15, 1e-12);
  // dzeta/dtau = 2 p = 2 sqrt(E - V): a full period is 2 * integral / 2.
  o.period = t_half;
  const double f = params.f_spin;
  auto weighted = [&](double s) {
    const double z = mid + hw * std::sin(s);
    return speed_inv(s) * effective_field(params, z).norm() / f;
  };
  const double avg = GK::integrate(weighted, -0.5 * kPi, 0.5 * kPi, 15, 1e-12) / t_half;
  o.freq.omega1 = 2.0 * kPi / o.period;
  o.freq.omega2 = avg;
  return o;
}

FrequencyPair adiabatic_frequencies(const LatticeParams& params, double alpha, double energy, double zeta_start)
{
  return adiabatic_orbit(params, alpha, energy, zeta_start).freq;
}

std::vector<ResonanceHit> resonance_scan_alpha(const LatticeParams& params, double energy, double alpha_lo,
                                               double alpha_hi, const std::vector<double>& ratios,
                                               double zeta_start, int samples)
{
  std::vector<ResonanceHit> hits;
  if (ratios.empty() || samples < 2) return hits;
  struct Sample {
    bool ok = false;
    double alpha = 0.0;
    double ratio = 0.0;
    bool spans = false;
  };
  auto eval = [&](double a) {
    Sample s;
    s.alpha = a;
    try {
      const SurfaceOrbit o = adiabatic_orbit(params, a, energy, zeta_start);
      s.ok = true;
      s.ratio = o.freq.ratio();
      s.spans = o.spans_barrier;
    } catch (const DomainError&) {
    }
    return s;
  };
  std::vector<Sample> grid;
  for (int i = 0; i < samples; ++i) grid.push_back(eval(alpha_lo + (alpha_hi - alpha_lo) * i / (samples - 1)));
  // omega1 vanishes on the separatrix between the families, so the ratio diverges there;
  // locate each family switch and sample geometrically towards it from both sides.
  std::vector<Sample> extra;
  for (int i = 0; i + 1 < samples; ++i) {
    Sample a = grid[static_cast<std::size_t>(i)], b = grid[static_cast<std::size_t>(i + 1)];
    if (!a.ok || !b.ok || a.spans == b.spans) continue;
    for (int it = 0; it < 50; ++it) {
      const Sample m = eval(0.5 * (a.alpha + b.alpha));
      if (!m.ok) break;
      (m.spans == a.spans ? a : b) = m;
    }
    const double step = grid[static_cast<std::size_t>(i + 1)].alpha - grid[static_cast<std::size_t>(i)].alpha;
    for (double d = 0.5 * step; d > 1e-12; d *= 0.5) {
      extra.push_back(eval(a.alpha - d));
      extra.push_back(eval(b.alpha + d));
    }
    extra.push_back(a);
    extra.push_back(b);
  }
  grid.insert(grid.end(), extra.begin(), extra.end());
  std::sort(grid.begin(), grid.end(), [](const Sample& x, const Sample& y) { return x.alpha < y.alpha; });
  samples = static_cast<int>(grid.size());
  for (double r : ratios) {
    for (int i = 0; i + 1 < samples; ++i) {
      Sample a = grid[static_cast<std::size_t>(i)], b = grid[static_cast<std::size_t>(i + 1)];
      if (!a.ok || !b.ok || a.spans != b.spans) continue;
      if ((a.ratio - r < 0.0) == (b.ratio - r < 0.0)) continue;
      for (int it = 0; it < 60; ++it) {
        const Sample m = eval(0.5 * (a.alpha + b.alpha));
        if (!m.ok || m.spans != a.spans) break;
        if ((m.ratio - r < 0.0) == (a.ratio - r < 0.0)) a = m; else b = m;
      }
      const ResonanceHit h{0.5 * (a.alpha + b.alpha), r, a.spans};
      const bool dup = std::any_of(hits.begin(), hits.end(), [&](const ResonanceHit& o) {
        return o.ratio == r && o.spans_barrier == h.spans_barrier && std::abs(o.coordinate - h.coordinate) < 1e-9;
      });
      if (!dup) hits.push_back(h);
    }
  }
  return hits;
}

std::vector<ResonanceHit> resonance_scan_nz(const LatticeParams& params, double energy, double nz_lo,
                                            double nz_hi, const std::vector<double>& ratios, int samples)
{
  std::vector<ResonanceHit> hits;
  if (ratios.empty() || samples < 2) return hits;
  auto ratio = [&](double nz, bool& ok) {
    ok = false;
    try {
      const double r = pendulum_action_angle(params, nz, energy).freq.ratio();
      ok = true;
      return r;
    } catch (const DomainError&) {
      return 0.0;
    }
  };
  for (double r : ratios) {
    bool ok_a = false;
    double na = nz_lo;
    double ra = ratio(na, ok_a);
    for (int i = 1; i < samples; ++i) {
      const double nb = nz_lo + (nz_hi - nz_lo) * i / (samples - 1);
      bool ok_b = false;
      const double rb = ratio(nb, ok_b);
      if (ok_a && ok_b && ((ra - r < 0.0) != (rb - r < 0.0))) {
        double lo = na, hi = nb, rlo = ra;
        for (int it = 0; it < 60; ++it) {
          const double m = 0.5 * (lo + hi);
          bool ok = false;
          const double rm = ratio(m, ok);
          if (!ok) break;
          if ((rm - r < 0.0) == (rlo - r < 0.0)) { lo = m; rlo = rm; } else { hi = m; }
        }
        hits.push_back({0.5 * (lo + hi), r, false});
      }
      na = nb;
      ra = rb;
      ok_a = ok_b;
    }
  }
  return hits;
}

double break_time(double lambda_per_second, double action_ratio)
{
  if (!(lambda_per_second > 0.0)) throw DomainError("break_time: lambda must be positive");
  if (!(action_ratio > 1.0)) throw DomainError("break_time: I/hbar must exceed 1");
  return std::log(action_ratio) / lambda_per_second;
}

}  // namespace modw
