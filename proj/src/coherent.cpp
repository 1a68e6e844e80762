#include "modw/coherent.hpp"

#include <cmath>
#include <numbers>

#include "modw/errors.hpp"
#include "modw/spin.hpp"

namespace modw {

HarmonicFrame::HarmonicFrame(double center, double omega) : center_(center), omega_(omega)
{
  if (!(omega > 0.0)) throw ConfigError("harmonic frame needs a positive frequency");
}

double HarmonicFrame::sigma_x() const { return 1.0 / std::sqrt(omega_); }
double HarmonicFrame::sigma_p() const { return 0.5 * std::sqrt(omega_); }

cplx HarmonicFrame::to_alpha(double zeta, double p) const
{
  return {(zeta - center_) / (2.0 * sigma_x()), p / (2.0 * sigma_p())};
}

double HarmonicFrame::zeta_of(cplx alpha) const { return center_ + 2.0 * sigma_x() * alpha.real(); }
double HarmonicFrame::p_of(cplx alpha) const { return 2.0 * sigma_p() * alpha.imag(); }

Eigen::Vector3d CoherentLabel::direction() const
{
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Eigen::VectorXcd coherent_wavefunction(const PeriodicGrid& grid, const HarmonicFrame& frame, cplx alpha,
                                       double* mass_loss)
{
  const double sx = frame.sigma_x();
  const double x0 = 2.0 * sx * alpha.real();
  const double p0 = frame.p_of(alpha);
  const double zc = frame.center() + x0;
  const double norm = std::pow(2.0 * std::numbers::pi * sx * sx, -0.25);
  Eigen::VectorXcd phi(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    // Nearest periodic image of the packet centre.
    const double d = grid.wrap_displacement(grid.x(i) - zc);
    phi(i) = std::polar(norm * std::exp(-d * d / (4.0 * sx * sx)), p0 * d + 0.5 * p0 * x0);
  }
  if (mass_loss) *mass_loss = std::abs(1.0 - phi.squaredNorm() * grid.spacing());
  return phi;
}

Eigen::VectorXcd fock_wavefunction(const PeriodicGrid& grid, const HarmonicFrame& frame, int n)
{
  if (n < 0) throw ConfigError("Fock index must be non-negative");
  const double scale = std::sqrt(2.0) * frame.sigma_x();
  Eigen::VectorXcd out(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double xi = grid.wrap_displacement(grid.x(i) - frame.center()) / scale;
    double h0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
    double h1 = std::sqrt(2.0) * xi * h0;
    double hn = h0;
    if (n == 1) hn = h1;
    for (int k = 1; k < n; ++k) {
      const double h2 = std::sqrt(2.0 / (k + 1)) * xi * h1 - std::sqrt(double(k) / (k + 1)) * h0;
      h0 = h1;
      h1 = h2;
      hn = h2;
    }
    out(i) = hn / std::sqrt(scale);
  }
  return out;
}

Eigen::VectorXcd fock_coherent_vector(cplx alpha, int n_max)
{
  Eigen::VectorXcd v(n_max + 1);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= n_max; ++n) v(n) = v(n - 1) * alpha / std::sqrt(double(n));
  return v;
}

SpinorWavefunction coherent_product_state(const PeriodicGrid& grid, const HarmonicFrame& frame, int f_spin,
                                          const CoherentLabel& label)
{
  SpinorWavefunction psi(grid, 2 * f_spin + 1);
  psi.amps = coherent_wavefunction(grid, frame, label.alpha) *
             spin_coherent_state(f_spin, label.theta, label.phi).transpose();
  return psi;
}

double coherent_product_q(const CoherentLabel& centre, const CoherentLabel& label, int f_spin)
{
  const double c = 0.5 * (1.0 + centre.direction().dot(label.direction()));
  return std::exp(-std::norm(centre.alpha - label.alpha)) * std::pow(std::max(c, 0.0), 2 * f_spin);
}

HusimiQ::HusimiQ(const SpinorWavefunction& psi, const HarmonicFrame& frame)
    : psi_(&psi), frame_(frame), f_(psi.spin())
{
}

Eigen::VectorXcd HusimiQ::spin_projection(double theta, double phi) const
{
  return psi_->amps * spin_coherent_state(f_, theta, phi).conjugate();
}

cplx HusimiQ::overlap(const Eigen::VectorXcd& spin_projected, cplx alpha) const
{
  const Eigen::VectorXcd g = coherent_wavefunction(psi_->grid, frame_, alpha);
  return g.dot(spin_projected) * psi_->grid.spacing();
}

double HusimiQ::operator()(const CoherentLabel& label) const
{
  return std::norm(overlap(spin_projection(label.theta, label.phi), label.alpha));
}

double HusimiQ::at(double zeta, double p, double theta, double phi) const
{
  return (*this)(CoherentLabel{frame_.to_alpha(zeta, p), theta, phi});
}

double q_value(const SpinorWavefunction& psi, const HarmonicFrame& frame, const CoherentLabel& label)
{
  double loss = 0.0;
  coherent_wavefunction(psi.grid, frame, label.alpha, &loss);
  if (loss > 1e-6)
    throw DomainError("coherent state truncated by the grid (mass loss " + std::to_string(loss) + ")");
  return HusimiQ(psi, frame)(label);
}

}  // namespace modw
