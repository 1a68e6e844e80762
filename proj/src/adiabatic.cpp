#include "modw/adiabatic.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "modw/errors.hpp"
#include "modw/potential.hpp"

namespace modw {

namespace {

// Makes <ref|v> real and non-negative.
void align_phase(const Eigen::VectorXcd& ref, Eigen::Ref<Eigen::VectorXcd> v)
{
  const std::complex<double> ov = ref.dot(v);
  if (std::abs(ov) > 0.0) v *= std::conj(ov) / std::abs(ov);
}

double band_value(const LatticeParams& p, int mu, double zeta)
{
  const double m = mu - p.f_spin;
  return scalar_potential(p, zeta) + (m / p.f_spin) * effective_field(p, zeta).norm();
}

// Golden-section minimum of f on [a, b].
template <class F>
double golden_min(F&& f, double a, double b, double tol = 1e-13)
{
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double v1_second_derivative(const LatticeParams& p, double z)
{
  const double bf = fictitious_field(p, z);
  const double bf1 = fictitious_field_derivative(p, z);
  const double bf2 = -4.0 * bf;  // bf ~ sin(2 z)
  const double uj2 = -4.0 * scalar_potential(p, z);
  const double b = std::hypot(p.bx, bf);
  return uj2 - (bf1 * bf1 + bf * bf2) / b + (bf * bf1) * (bf * bf1) / (b * b * b);
}

}  // namespace

AdiabaticSpectrum adiabatic_spectrum(const LatticeParams& params, const SpinMatrices& spin,
                                     const PeriodicGrid& grid)
{
  AdiabaticSpectrum s;
  s.grid = grid;
  const int n = grid.size();
  const int d = spin.dim();
  s.potentials.resize(n, d);
  s.eigenvectors.resize(static_cast<std::size_t>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(d);
  for (int i = 0; i < n; ++i) {
    const double z = grid.x(i);
    solver.compute(potential_matrix(params, spin, z));
    if (solver.info() != Eigen::Success) {
      std::ostringstream os;
      os << "eigensolver failed at zeta = " << z;
      throw NumericalError(os.str());
    }
    s.potentials.row(i) = solver.eigenvalues().transpose();
    Eigen::MatrixXcd vecs = solver.eigenvectors();
    for (int mu = 0; mu < d; ++mu) {
      if (i == 0) {
        // Largest fz-basis component real positive.
        Eigen::Index k = 0;
        vecs.col(mu).cwiseAbs().maxCoeff(&k);
        const std::complex<double> c = vecs(k, mu);
        vecs.col(mu) *= std::conj(c) / std::abs(c);
      } else {
        align_phase(s.eigenvectors[static_cast<std::size_t>(i - 1)].col(mu), vecs.col(mu));
      }
    }
    s.eigenvectors[static_cast<std::size_t>(i)] = std::move(vecs);
  }
  return s;
}

Eigen::VectorXd gauge_correction(const AdiabaticSpectrum& spectrum, int band, double min_overlap)
{
  const int n = spectrum.grid.size();
  const double h = spectrum.grid.spacing();
  Eigen::VectorXd phi(n);
  auto vec = [&](int i) -> Eigen::VectorXcd {
    return spectrum.basis(spectrum.grid.wrap_index(i)).col(band);
  };
  for (int i = 0; i < n; ++i) {
    // Eighth-order centered difference; neighbours are phase-aligned to v0 first.
    static constexpr double kStencil[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    const Eigen::VectorXcd v0 = vec(i);
    Eigen::VectorXcd dv = Eigen::VectorXcd::Zero(v0.size());
    for (int k = 1; k <= 4; ++k) {
      Eigen::VectorXcd lo = vec(i - k), hi = vec(i + k);
      if (k == 1) {
        const double ov = std::min(std::abs(v0.dot(lo)), std::abs(v0.dot(hi)));
        if (ov < min_overlap) {
          std::ostringstream os;
          os << "adiabatic eigenvector overlap " << ov << " < " << min_overlap << " near zeta = "
             << spectrum.grid.x(i) << " (band " << band << "); refine the grid";
          throw ResolutionError(os.str());
        }
      }
      align_phase(v0, lo);
      align_phase(v0, hi);
      dv += kStencil[k - 1] * (hi - lo);
    }
    dv /= h;
    const double val = dv.squaredNorm() - std::norm(v0.dot(dv));
    phi(i) = std::max(val, 0.0);
  }
  return phi;
}

DoubleWell analyze_double_well(const LatticeParams& params)
{
  auto v1 = [&](double z) { return lowest_adiabatic_potential(params, z); };
  const double half = 0.5 * std::numbers::pi;
  const int samples = 4096;
  // Coarse scan of each half period.
  auto coarse_min = [&](double a, double b) {
    double best = a, fb = v1(a);
    for (int i = 1; i <= samples; ++i) {
      const double z = a + (b - a) * i / samples;
      if (v1(z) < fb) { fb = v1(z); best = z; }
    }
    const double dz = (b - a) / samples;
    return golden_min(v1, std::max(a, best - dz), std::min(b, best + dz));
  };
  DoubleWell w;
  w.left_min = coarse_min(-half, 0.0);
  w.right_min = coarse_min(0.0, half);
  w.left_value = v1(w.left_min);
  w.right_value = v1(w.right_min);
  auto neg = [&](double z) { return -v1(z); };
  w.barrier_pos = golden_min(neg, w.left_min, w.right_min);
  w.barrier = v1(w.barrier_pos);
  const double depth = w.barrier - std::max(w.left_value, w.right_value);
  const bool at_edge = w.left_min + half < 1e-4 || half - w.right_min < 1e-4;
  if (at_edge || !(depth > 1e-9) || w.barrier_pos - w.left_min < 1e-6 ||
      w.right_min - w.barrier_pos < 1e-6)
    throw CalibrationError("lowest adiabatic potential is not a double well (no interior barrier)");
  w.curvature_left = v1_second_derivative(params, w.left_min);
  w.curvature_right = v1_second_derivative(params, w.right_min);
  return w;
}

double band_minimum(const LatticeParams& params, int mu, int samples)
{
  const double len = params.domain_length();
  const double a = -0.5 * len;
  double best = a, fb = band_value(params, mu, a);
  for (int i = 1; i < samples; ++i) {
    const double z = a + len * i / samples;
    const double f = band_value(params, mu, z);
    if (f < fb) { fb = f; best = z; }
  }
  const double dz = len / samples;
  const double z = golden_min([&](double x) { return band_value(params, mu, x); }, best - dz, best + dz);
  return std::min(fb, band_value(params, mu, z));
}

}  // namespace modw
