#include "modw/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "modw/errors.hpp"
#include "modw/quadrature.hpp"
#include "modw/spin.hpp"

namespace modw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Walker {
  double zeta, p, u, phi;
  ClassicalState state() const
  {
    return ClassicalState::from_angles(zeta, p, std::acos(std::clamp(u, -1.0, 1.0)), phi);
  }
};

double wrap_periodic(double x, double period)
{
  if (period <= 0.0) return x;
  return x - period * std::floor(x / period + 0.5);
}

}  // namespace

double Ensemble::total_weight() const
{
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double Ensemble::effective_size() const
{
  double s = 0.0, s2 = 0.0;
  for (double w : weights) {
    s += w;
    s2 += w * w;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

double autocorrelation(const std::vector<double>& x, int lag)
{
  const std::size_t n = x.size();
  if (lag < 0 || static_cast<std::size_t>(lag) >= n) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += (x[i] - mean) * (x[i] - mean);
  for (std::size_t i = 0; i + lag < n; ++i) cov += (x[i] - mean) * (x[i + lag] - mean);
  return var > 0.0 ? cov / var : 0.0;
}

Ensemble metropolis_sample(const PhaseSpaceDensity& density, const ClassicalState& start,
                           const HarmonicFrame& frame, const MetropolisOptions& options)
{
  if (options.count < 1) throw ConfigError("sample count must be positive");
  std::array<double, 4> width = options.widths;
  const std::array<double, 4> fallback{2.0 * frame.sigma_x(), 2.0 * frame.sigma_p(), 0.5, 1.0};
  for (int k = 0; k < 4; ++k)
    if (!(width[k] > 0.0)) width[k] = fallback[k];

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Walker cur{start.zeta, start.p, start.n.z(), start.phi()};
  double dcur = density(cur.state());
  if (!(dcur > 0.0)) throw DomainError("Metropolis start point has zero density");

  long accepted = 0, proposed = 0;
  auto step = [&]() {
    Walker nxt = cur;
    nxt.zeta = wrap_periodic(cur.zeta + width[0] * gauss(rng), options.zeta_period);
    nxt.p = cur.p + width[1] * gauss(rng);
    double u = cur.u + width[2] * gauss(rng);
    // Reflection keeps the proposal symmetric on [-1, 1].
    while (u > 1.0 || u < -1.0) u = u > 1.0 ? 2.0 - u : -2.0 - u;
    nxt.u = u;
    nxt.phi = std::fmod(cur.phi + width[3] * gauss(rng) + kTwoPi, kTwoPi);
    if (nxt.phi < 0.0) nxt.phi += kTwoPi;
    const double dn = density(nxt.state());
    ++proposed;
    if (dn >= dcur || unif(rng) * dcur < dn) {
      cur = nxt;
      dcur = dn;
      ++accepted;
    }
  };

  for (int i = 0; i < options.burn_in; ++i) step();

  // Pilot run fixes the thinning interval from the n_z autocorrelation.
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(options.pilot));
  for (int i = 0; i < options.pilot; ++i) {
    step();
    trace.push_back(cur.u);
  }
  int thin = 1;
  while (thin < options.max_thinning && autocorrelation(trace, thin) >= options.max_lag1) ++thin;

  accepted = proposed = 0;
  Ensemble ens;
  ens.seed = options.seed;
  ens.burn_in = options.burn_in;
  ens.thinning = thin;
  ens.samples.reserve(static_cast<std::size_t>(options.count));
  for (int i = 0; i < options.count; ++i) {
    for (int k = 0; k < thin; ++k) step();
    ens.samples.push_back(cur.state());
  }
  ens.weights.assign(ens.samples.size(), 1.0);
  ens.acceptance = static_cast<double>(accepted) / std::max(1L, proposed);
  if (ens.acceptance < options.min_acceptance || ens.acceptance > options.max_acceptance) {
    const double scale = ens.acceptance / 0.3;
    std::ostringstream os;
    os << "Metropolis acceptance " << ens.acceptance << " outside [" << options.min_acceptance << ", "
       << options.max_acceptance << "]; suggested widths (zeta, p, cos theta, phi) = (" << width[0] * scale
       << ", " << width[1] * scale << ", " << std::min(2.0, width[2] * scale) << ", " << width[3] * scale << ")";
    throw TuningError(os.str());
  }
  return ens;
}

Ensemble metropolis_sample(const SpinorWavefunction& psi, const HarmonicFrame& frame,
                           const MetropolisOptions& options)
{
  const HusimiQ q(psi, frame);
  // Start at the maximum of Q over a coarse scan through the density peak.
  const Eigen::VectorXd rho = psi.density();
  Eigen::Index imax = 0;
  rho.maxCoeff(&imax);
  const double z0 = psi.grid.x(static_cast<int>(imax));
  const int f = psi.spin();
  const Eigen::VectorXcd row = psi.amps.row(imax).transpose();
  double fz = 0.0;
  for (int c = 0; c < psi.dim(); ++c) fz += (c - f) * std::norm(row(c));
  const double u0 = std::clamp(fz / (row.squaredNorm() * f), -1.0, 1.0);
  ClassicalState start;
  double best = -1.0;
  for (int k = 0; k < 16; ++k) {
    const double phi = kTwoPi * k / 16;
    const ClassicalState s = ClassicalState::from_angles(z0, 0.0, std::acos(u0), phi);
    const double v = q.at(s.zeta, s.p, s.theta(), phi);
    if (v > best) {
      best = v;
      start = s;
    }
  }
  MetropolisOptions opt = options;
  if (opt.zeta_period <= 0.0) opt.zeta_period = psi.grid.length();
  return metropolis_sample([&](const ClassicalState& s) { return q.at(s.zeta, s.p, s.theta(), s.phi()); },
                           start, frame, opt);
}

namespace {

struct SpinNodes {
  std::vector<double> theta, phi, weight;  // weight includes (2F+1)/(4 pi)
};

SpinNodes spin_nodes(int f_spin, int n_cos, int n_phi)
{
  const GaussRule g = gauss_legendre(n_cos);
  SpinNodes s;
  const double pref = (2.0 * f_spin + 1.0) / (4.0 * std::numbers::pi);
  for (std::size_t a = 0; a < g.nodes.size(); ++a)
    for (int b = 0; b < n_phi; ++b) {
      s.theta.push_back(std::acos(g.nodes[a]));
      s.phi.push_back(kTwoPi * (b + 0.5) / n_phi);
      s.weight.push_back(pref * g.weights[a] * kTwoPi / n_phi);
    }
  return s;
}

void check_spec(const QuadratureSpec& spec)
{
  if (spec.n_zeta < 2 || spec.n_p < 2 || spec.n_phi < 1) throw ConfigError("quadrature grid too small");
  if (!(spec.zeta_hi > spec.zeta_lo)) throw ConfigError("quadrature zeta range is empty");
}

Ensemble prune(std::vector<ClassicalState>&& pts, std::vector<double>&& w, double rel)
{
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, v);
  Ensemble e;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (w[i] > rel * wmax) {
      e.samples.push_back(pts[i]);
      e.weights.push_back(w[i]);
    }
  return e;
}

}  // namespace

Ensemble quadrature_ensemble(const CoherentDensity& q, const HarmonicFrame& frame, int f_spin,
                             const QuadratureSpec& spec_in)
{
  QuadratureSpec spec = spec_in;
  check_spec(spec);
  if (spec.p_half_width <= 0.0) spec.p_half_width = 6.0 * frame.sigma_p();
  const SpinNodes sn = spin_nodes(f_spin, spec.n_cos, spec.n_phi);
  const double dz = (spec.zeta_hi - spec.zeta_lo) / spec.n_zeta;
  const double dp = 2.0 * spec.p_half_width / (spec.n_p - 1);
  std::vector<ClassicalState> pts;
  std::vector<double> w;
  for (int i = 0; i < spec.n_zeta; ++i)
    for (int j = 0; j < spec.n_p; ++j) {
      const double z = spec.zeta_lo + i * dz;
      const double p = spec.p_center - spec.p_half_width + j * dp;
      for (std::size_t k = 0; k < sn.theta.size(); ++k) {
        const CoherentLabel l{frame.to_alpha(z, p), sn.theta[k], sn.phi[k]};
        pts.push_back(ClassicalState::from_angles(z, p, sn.theta[k], sn.phi[k]));
        w.push_back(q(l) * sn.weight[k] * dz * dp / kTwoPi);
      }
    }
  return prune(std::move(pts), std::move(w), spec.prune);
}

Ensemble quadrature_ensemble(const SpinorWavefunction& psi, const HarmonicFrame& frame, QuadratureSpec spec)
{
  if (spec.zeta_hi <= spec.zeta_lo) {
    spec.zeta_lo = psi.grid.start();
    spec.zeta_hi = psi.grid.start() + psi.grid.length();
  }
  check_spec(spec);
  if (spec.p_half_width <= 0.0) spec.p_half_width = 6.0 * frame.sigma_p();
  const int f = psi.spin();
  const SpinNodes sn = spin_nodes(f, spec.n_cos, spec.n_phi);
  const int ns = static_cast<int>(sn.theta.size());
  const int nm = spec.n_zeta * spec.n_p;
  const double dz = (spec.zeta_hi - spec.zeta_lo) / spec.n_zeta;
  const double dp = 2.0 * spec.p_half_width / (spec.n_p - 1);

  // Overlaps <alpha|<n|psi> for all pairs as one matrix product.
  Eigen::MatrixXcd spin_proj(psi.grid.size(), ns);
  for (int k = 0; k < ns; ++k)
    spin_proj.col(k) = psi.amps * spin_coherent_state(f, sn.theta[static_cast<std::size_t>(k)],
                                                      sn.phi[static_cast<std::size_t>(k)]).conjugate();
  Eigen::MatrixXcd mot(psi.grid.size(), nm);
  std::vector<std::pair<double, double>> zp;
  for (int i = 0; i < spec.n_zeta; ++i)
    for (int j = 0; j < spec.n_p; ++j) {
      const double z = spec.zeta_lo + i * dz;
      const double p = spec.p_center - spec.p_half_width + j * dp;
      mot.col(static_cast<Eigen::Index>(zp.size())) = coherent_wavefunction(psi.grid, frame, frame.to_alpha(z, p));
      zp.emplace_back(z, p);
    }
  const Eigen::MatrixXcd ov = (mot.adjoint() * spin_proj) * psi.grid.spacing();

  std::vector<ClassicalState> pts;
  std::vector<double> w;
  pts.reserve(static_cast<std::size_t>(nm) * ns);
  w.reserve(static_cast<std::size_t>(nm) * ns);
  for (int a = 0; a < nm; ++a)
    for (int k = 0; k < ns; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      pts.push_back(ClassicalState::from_angles(zp[static_cast<std::size_t>(a)].first,
                                                zp[static_cast<std::size_t>(a)].second, sn.theta[ku], sn.phi[ku]));
      w.push_back(std::norm(ov(a, k)) * sn.weight[ku] * dz * dp / kTwoPi);
    }
  return prune(std::move(pts), std::move(w), spec.prune);
}

Ensemble propagate_ensemble(const LatticeParams& params, const Ensemble& ensemble, double tau,
                            const IntegratorOptions& options)
{
  Ensemble out = ensemble;
  if (tau == 0.0) return out;
  const ClassicalIntegrator integ(params, options.order);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    ClassicalState& s = out.samples[i];
    const double e0 = classical_energy(params, s);
    integ.advance(s, tau, options.dtau);
    if (options.energy_tolerance > 0.0) {
      const double drift = std::abs(classical_energy(params, s) - e0) / std::max(std::abs(e0), 1.0);
      if (drift > options.energy_tolerance) {
        std::ostringstream os;
        os << "sample " << i << ": relative energy drift " << drift << " exceeds " << options.energy_tolerance;
        throw IntegrationError(os.str());
      }
    }
  }
  return out;
}

Estimate mean_fz_classical(const Ensemble& ensemble, int f_spin, double sign)
{
  const double wsum = ensemble.total_weight();
  if (!(wsum > 0.0)) throw DomainError("empty ensemble");
  double mean = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) mean += ensemble.weights[i] * ensemble.samples[i].n.z();
  mean /= wsum;
  double var = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const double d = ensemble.samples[i].n.z() - mean;
    var += ensemble.weights[i] * d * d;
  }
  var /= wsum;
  Estimate e;
  e.value = sign * (f_spin + 1) * mean;
  e.std_error = (f_spin + 1) * std::sqrt(var / ensemble.effective_size());
  return e;
}

double magnetization_sign(const Ensemble& ensemble, int f_spin, double quantum_fz)
{
  const double c = mean_fz_classical(ensemble, f_spin).value;
  return (c * quantum_fz < 0.0) ? -1.0 : 1.0;
}

Eigen::VectorXd reduced_position_density(const Ensemble& ensemble, const PeriodicGrid& grid)
{
  Eigen::VectorXd h = Eigen::VectorXd::Zero(grid.size());
  const double wsum = ensemble.total_weight();
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const double z = grid.wrap_displacement(ensemble.samples[i].zeta);
    const int k = grid.wrap_index(static_cast<int>(std::lround((z - grid.start()) / grid.spacing())));
    h(k) += ensemble.weights[i];
  }
  return h / (wsum * grid.spacing());
}

Eigen::VectorXd q_position_marginal(const SpinorWavefunction& psi, const HarmonicFrame& frame)
{
  const Eigen::VectorXd rho = psi.density();
  const PeriodicGrid& g = psi.grid;
  const double sx2 = frame.sigma_x() * frame.sigma_x();
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * sx2);
  Eigen::VectorXd kernel(g.size());
  for (int d = 0; d < g.size(); ++d) {
    const double x = g.wrap_displacement(d * g.spacing());
    kernel(d) = norm * std::exp(-x * x / (2.0 * sx2));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j) out(i) += kernel(g.wrap_index(i - j)) * rho(j);
  return out * g.spacing();
}

double left_mass(const Eigen::VectorXd& density, const PeriodicGrid& grid)
{
  double m = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double z = grid.x(i);
    if (z < 0.0) m += density(i);
    else if (z == 0.0) m += 0.5 * density(i);
  }
  return m * grid.spacing();
}

}  // namespace modw
