#include "modw/classical.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "modw/errors.hpp"
#include "modw/potential.hpp"

namespace modw {

namespace {

// sin(x)/x
double sinc(double x)
{
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// (1 - sinc(x)) / x^2
double one_minus_sinc_over_x2(double x)
{
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return 1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0;
  }
  return (1.0 - std::sin(x) / x) / (x * x);
}

std::vector<double> composition_weights(SplittingOrder order)
{
  std::vector<double> half;  // w_1..w_m; the sequence is w_m..w_1 w_0 w_1..w_m
  switch (order) {
    case SplittingOrder::kSecond:
      return {1.0};
    case SplittingOrder::kFourth: {
      const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
      half = {w1};
      break;
    }
    case SplittingOrder::kSixth:
      half = {-1.17767998417887, 0.235573213359357, 0.784513610477560};
      break;
    case SplittingOrder::kEighth:
      half = {0.102799849391985, -1.96061023297549, 1.93813913762276, -0.158240635368243,
              -1.44485223686048, 0.253693336566229, 0.914844246229740};
      break;
  }
  // Yoshida tabulates w_1..w_m with w_1 adjacent to w_0.
  double sum = 0.0;
  for (double w : half) sum += w;
  const double w0 = 1.0 - 2.0 * sum;
  std::vector<double> seq(half.rbegin(), half.rend());
  seq.push_back(w0);
  seq.insert(seq.end(), half.begin(), half.end());
  return seq;
}

double wrap_angle(double a)
{
  const double two_pi = 2.0 * std::numbers::pi;
  return a - two_pi * std::floor(a / two_pi + 0.5);
}

}  // namespace

ClassicalState ClassicalState::from_angles(double zeta, double p, double theta, double phi)
{
  ClassicalState s;
  s.zeta = zeta;
  s.p = p;
  s.n = {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  return s;
}

double ClassicalState::theta() const { return std::atan2(std::hypot(n.x(), n.y()), n.z()); }

double ClassicalState::phi() const
{
  double a = std::atan2(n.y(), n.x());
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

double classical_energy(const LatticeParams& params, const ClassicalState& s)
{
  return s.p * s.p + classical_potential(params, s.zeta, s.n);
}

ClassicalIntegrator::ClassicalIntegrator(const LatticeParams& params, SplittingOrder order)
    : params_(params), weights_(composition_weights(order))
{
}

void ClassicalIntegrator::potential_flow(ClassicalState& s, double h) const
{
  const Eigen::Vector3d om = precession_field(params_, s.zeta);
  const double w = om.norm();
  const double x = w * h;
  const Eigen::Vector3d cr = om.cross(s.n);
  const double on = om.dot(s.n);
  const double sx = sinc(x);
  const double sh = sinc(0.5 * x);
  // Time integral of n(t) over [0, h].
  const double nz_int = s.n.z() * h * sx + om.z() * on * h * h * h * one_minus_sinc_over_x2(x) +
                        cr.z() * h * h * 0.5 * sh * sh;
  s.p += -scalar_potential_derivative(params_, s.zeta) * h -
         fictitious_field_derivative(params_, s.zeta) * nz_int;
  s.n = s.n * std::cos(x) + cr * (h * sx) + om * (on * h * h * 0.5 * sh * sh);
}

void ClassicalIntegrator::base_step(ClassicalState& s, double h) const
{
  s.zeta += s.p * h;  // drift h/2 at velocity 2p
  potential_flow(s, h);
  s.zeta += s.p * h;
}

void ClassicalIntegrator::step(ClassicalState& s, double h) const
{
  // Adjacent half drifts of consecutive sub-steps are merged.
  double pending = 0.0;
  for (double w : weights_) {
    pending += 0.5 * w * h;
    s.zeta += 2.0 * s.p * pending;
    potential_flow(s, w * h);
    pending = 0.5 * w * h;
  }
  s.zeta += 2.0 * s.p * pending;
}

void ClassicalIntegrator::advance(ClassicalState& s, double tau, double dtau) const
{
  if (tau == 0.0) return;
  const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(tau) / dtau - 1e-9)));
  const double h = tau / steps;
  for (long i = 0; i < steps; ++i) step(s, h);
}

double Trajectory::max_relative_energy_drift() const
{
  if (energies.empty()) return 0.0;
  const double e0 = energies.front();
  const double scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
  double m = 0.0;
  for (double e : energies) m = std::max(m, std::abs(e - e0) / scale);
  return m;
}

Trajectory integrate(const LatticeParams& params, const ClassicalState& initial, double tau_span,
                     const IntegratorOptions& options)
{
  if (!(options.dtau > 0.0)) throw ConfigError("dtau must be positive");
  if (std::abs(initial.n.norm() - 1.0) > 1e-10) throw DomainError("spin direction must be a unit vector");
  const ClassicalIntegrator integ(params, options.order);
  const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(tau_span) / options.dtau - 1e-9)));
  const double h = tau_span / steps;
  const int every = std::max(1, options.record_every);

  Trajectory tr;
  ClassicalState s = initial;
  const double e0 = classical_energy(params, s);
  const double scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
  double worst = 0.0;
  auto record = [&](long i) {
    tr.times.push_back(i * h);
    tr.states.push_back(s);
    tr.energies.push_back(classical_energy(params, s));
  };
  record(0);
  for (long i = 1; i <= steps; ++i) {
    integ.step(s, h);
    const double drift = std::abs(classical_energy(params, s) - e0) / scale;
    worst = std::max(worst, drift);
    if (i % every == 0 || i == steps) record(i);
  }
  if (options.energy_tolerance > 0.0 && worst > options.energy_tolerance) {
    std::ostringstream os;
    os << "relative energy drift " << worst << " exceeds " << options.energy_tolerance
       << " (dtau = " << options.dtau << "); use a smaller dtau or a higher splitting order";
    throw IntegrationError(os.str());
  }
  return tr;
}

Eigen::Matrix4d flow_jacobian(const LatticeParams& params, const ClassicalState& s, double tau,
                              const IntegratorOptions& options, double delta)
{
  const ClassicalIntegrator integ(params, options.order);
  const double f = params.f_spin;
  auto coords = [&](const ClassicalState& x) {
    return Eigen::Vector4d(x.zeta, x.p, std::atan2(x.n.y(), x.n.x()), f * x.n.z());
  };
  auto from = [&](const Eigen::Vector4d& c) {
    const double u = c(3) / f;
    return ClassicalState::from_angles(c(0), c(1), std::acos(std::clamp(u, -1.0, 1.0)), c(2));
  };
  const Eigen::Vector4d c0 = coords(s);
  Eigen::Matrix4d jac;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d cp = c0, cm = c0;
    cp(k) += delta;
    cm(k) -= delta;
    ClassicalState sp = from(cp), sm = from(cm);
    integ.advance(sp, tau, options.dtau);
    integ.advance(sm, tau, options.dtau);
    Eigen::Vector4d d = coords(sp) - coords(sm);
    d(2) = wrap_angle(d(2));
    jac.col(k) = d / (2.0 * delta);
  }
  return jac;
}

}  // namespace modw
