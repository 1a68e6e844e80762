#include "modw/section.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "modw/adiabatic.hpp"
#include "modw/errors.hpp"
#include "modw/frequencies.hpp"
#include "modw/potential.hpp"
#include "modw/rng.hpp"

namespace modw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phi(double a)
{
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

double wrap_signed(double a) { return a - kTwoPi * std::floor(a / kTwoPi + 0.5); }

template <class F>
double bisect(F&& f, double a, double b, double fa)
{
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

Eigen::Vector3d direction(double phi, double nz)
{
  const double s = std::sqrt(std::max(0.0, 1.0 - nz * nz));
  return {s * std::cos(phi), s * std::sin(phi), nz};
}

// Refines a p: - -> + crossing inside the step starting at `s` of length h.
SectionPoint refine_crossing(const ClassicalIntegrator& integ, const ClassicalState& s, double t0,
                             double h, double tol, int seed_index)
{
  double a = 0.0, b = h;
  ClassicalState best = s;
  double tb = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    ClassicalState x = s;
    integ.step(x, m);
    best = x;
    tb = m;
    if (std::abs(x.p) < tol && b - a < 1e-12) break;
    if (x.p < 0.0) a = m; else b = m;
    if (b - a < 1e-16) break;
  }
  SectionPoint pt;
  pt.phi = best.phi();
  pt.n_z = best.n.z();
  pt.zeta = best.zeta;
  pt.tau = t0 + tb;
  pt.seed_index = seed_index;
  return pt;
}

}  // namespace

std::vector<double> energy_shell_positions(const LatticeParams& params, double energy,
                                           const Eigen::Vector3d& n, int scan_points)
{
  const double len = params.domain_length();
  const double a = -0.5 * len;
  auto f = [&](double z) { return classical_potential(params, z, n) - energy; };
  std::vector<double> roots;
  double z0 = a, f0 = f(a);
  for (int i = 1; i <= scan_points; ++i) {
    const double z1 = a + len * i / scan_points;
    const double f1 = f(z1);
    if (f0 == 0.0) {
      roots.push_back(z0);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      roots.push_back(bisect(f, z0, z1, f0));
    }
    z0 = z1;
    f0 = f1;
  }
  return roots;
}

ClassicalState sample_shell_state(const LatticeParams& params, double energy, std::uint64_t seed,
                                  int max_tries)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uphi(0.0, kTwoPi), unz(-1.0, 1.0);
  for (int t = 0; t < max_tries; ++t) {
    const double phi = uphi(rng);
    const double nz = unz(rng);
    const Eigen::Vector3d n = direction(phi, nz);
    const auto roots = energy_shell_positions(params, energy, n, 512);
    if (roots.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
    ClassicalState s;
    s.zeta = roots[pick(rng)];
    s.p = 0.0;
    s.n = n;
    return s;
  }
  throw DomainError("no point of the p = 0 energy shell found at E = " + std::to_string(energy));
}

double classical_potential_minimum(const LatticeParams& params) { return band_minimum(params, 0); }

std::vector<SectionPoint> section_crossings(const LatticeParams& params, const ClassicalState& initial,
                                            double tau_max, const IntegratorOptions& integrator,
                                            double p_tolerance, int seed_index)
{
  const ClassicalIntegrator integ(params, integrator.order);
  const long steps = static_cast<long>(std::ceil(tau_max / integrator.dtau));
  const double h = tau_max / steps;
  std::vector<SectionPoint> out;
  ClassicalState s = initial;
  for (long i = 0; i < steps; ++i) {
    const ClassicalState prev = s;
    integ.step(s, h);
    if (prev.p < 0.0 && s.p >= 0.0) out.push_back(refine_crossing(integ, prev, i * h, h, p_tolerance, seed_index));
  }
  return out;
}

std::vector<SectionPoint> poincare_section(const LatticeParams& params, double energy,
                                           const SectionOptions& options)
{
  const double vmin = classical_potential_minimum(params);
  if (energy < vmin) {
    std::ostringstream os;
    os << "section energy " << energy << " lies below the potential minimum " << vmin;
    throw DomainError(os.str());
  }
  std::vector<SectionPoint> all;
  for (int i = 0; i < options.seeds; ++i) {
    const ClassicalState s0 = sample_shell_state(params, energy, derive_seed(options.rng_seed, i));
    auto pts = section_crossings(params, s0, options.tau_max, options.integrator, options.p_tolerance, i);
    all.insert(all.end(), pts.begin(), pts.end());
  }
  return all;
}

SectionMapResult section_return_map(const LatticeParams& params, double energy, double phi, double n_z,
                                    double zeta_hint, const IntegratorOptions& integrator, double tau_limit)
{
  SectionMapResult r;
  if (std::abs(n_z) > 1.0) return r;
  const Eigen::Vector3d n = direction(phi, n_z);
  // Left turning point: a root where the force pushes towards larger zeta.
  double best = 0.0, dist = 1e300;
  for (double z : energy_shell_positions(params, energy, n, 2048)) {
    if (classical_force(params, z, n) <= 0.0) continue;
    const double d = std::abs(z - zeta_hint);
    if (d < dist) { dist = d; best = z; }
  }
  if (dist == 1e300) return r;
  ClassicalState s;
  s.zeta = best;
  s.p = 0.0;
  s.n = n;
  const ClassicalIntegrator integ(params, integrator.order);
  const double h = integrator.dtau;
  const long steps = static_cast<long>(std::ceil(tau_limit / h));
  // Leave the section before looking for the next crossing.
  bool left = false;
  for (long i = 0; i < steps; ++i) {
    const ClassicalState prev = s;
    integ.step(s, h);
    if (!left) {
      left = s.p > 1e-9 || i > 10;
      continue;
    }
    if (prev.p < 0.0 && s.p >= 0.0) {
      const SectionPoint pt = refine_crossing(integ, prev, i * h, h, 1e-12, 0);
      r.ok = true;
      r.phi = pt.phi;
      r.n_z = pt.n_z;
      r.zeta = pt.zeta;
      r.return_time = pt.tau;
      return r;
    }
  }
  return r;
}

namespace {

double orbit_winding(const LatticeParams& params, double phi, double n_z, double zeta, double period,
                     const IntegratorOptions& integrator)
{
  ClassicalState s;
  s.zeta = zeta;
  s.n = direction(phi, n_z);
  const ClassicalIntegrator integ(params, integrator.order);
  const long steps = std::max(1L, static_cast<long>(std::ceil(period / integrator.dtau)));
  const double h = period / steps;
  // Trapezoid over the step grid.
  double acc = 0.5 * effective_field(params, s.zeta).norm();
  for (long i = 0; i < steps; ++i) {
    integ.step(s, h);
    acc += (i + 1 == steps ? 0.5 : 1.0) * effective_field(params, s.zeta).norm();
  }
  const double omega2 = acc * h / period / params.f_spin;
  return omega2 * period / (2.0 * std::numbers::pi);
}

}  // namespace

SectionFixedPoint find_section_fixed_point(const LatticeParams& params, double energy, double phi_guess,
                                           double nz_guess, double zeta_hint,
                                           const IntegratorOptions& integrator)
{
  SectionFixedPoint fp;
  Eigen::Vector2d x(phi_guess, nz_guess);
  double zeta = zeta_hint;
  auto residual = [&](const Eigen::Vector2d& y, SectionMapResult* out) -> std::optional<Eigen::Vector2d> {
    const SectionMapResult m = section_return_map(params, energy, y(0), y(1), zeta, integrator);
    if (!m.ok) return std::nullopt;
    if (out) *out = m;
    return Eigen::Vector2d(wrap_signed(m.phi - y(0)), m.n_z - y(1));
  };
  const double d = 1e-6;
  for (int it = 0; it < 40; ++it) {
    SectionMapResult m;
    auto f0 = residual(x, &m);
    if (!f0) return fp;
    Eigen::Matrix2d jac;
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d xp = x, xm = x;
      xp(k) += d;
      xm(k) -= d;
      auto fpv = residual(xp, nullptr);
      auto fmv = residual(xm, nullptr);
      if (!fpv || !fmv) return fp;
      jac.col(k) = (*fpv - *fmv) / (2.0 * d);
    }
    fp.phi = wrap_phi(x(0));
    fp.n_z = x(1);
    fp.zeta = m.zeta;
    fp.return_time = m.return_time;
    fp.trace = (jac + Eigen::Matrix2d::Identity()).trace();
    if (f0->norm() < 1e-9) {
      fp.converged = true;
      fp.winding = orbit_winding(params, x(0), x(1), m.zeta, m.return_time, integrator);
      return fp;
    }
    Eigen::Vector2d dx = jac.fullPivLu().solve(-*f0);
    // Damped step keeps n_z inside [-1, 1].
    double lam = 1.0;
    while (std::abs(x(1) + lam * dx(1)) >= 1.0 && lam > 1e-6) lam *= 0.5;
    x += lam * dx;
    zeta = m.zeta;
  }
  return fp;
}

std::vector<SectionFixedPoint> resonant_island_centres(const LatticeParams& params, double energy, double ratio,
                                                       double zeta_start, const IntegratorOptions& integrator,
                                                       int seeds)
{
  std::vector<SectionFixedPoint> out;
  for (const ResonanceHit& hit : resonance_scan_alpha(params, energy, 0.0, std::numbers::pi, {ratio}, zeta_start)) {
    SurfaceOrbit orbit;
    try {
      orbit = adiabatic_orbit(params, hit.coordinate, energy, zeta_start);
    } catch (const DomainError&) {
      continue;
    }
    // Spin tilted by alpha from the low-energy direction -b, at the left turning point.
    const double z = orbit.left;
    const Eigen::Vector3d down = -effective_field(params, z).normalized();
    const Eigen::Vector3d e1 = Eigen::Vector3d::UnitY().cross(down).normalized();
    const Eigen::Vector3d e2 = down.cross(e1);
    for (int k = 0; k < seeds; ++k) {
      const double psi = 2.0 * std::numbers::pi * k / seeds;
      const Eigen::Vector3d n = std::cos(hit.coordinate) * down +
                                std::sin(hit.coordinate) * (std::cos(psi) * e1 + std::sin(psi) * e2);
      const SectionFixedPoint fp =
          find_section_fixed_point(params, energy, std::atan2(n.y(), n.x()), n.z(), z, integrator);
      if (!fp.converged) continue;
      const bool dup = std::any_of(out.begin(), out.end(), [&](const SectionFixedPoint& o) {
        return std::abs(wrap_signed(o.phi - fp.phi)) < 1e-6 && std::abs(o.n_z - fp.n_z) < 1e-6;
      });
      if (!dup) out.push_back(fp);
    }
  }
  return out;
}

}  // namespace modw
