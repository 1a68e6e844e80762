#include "modw/spin.hpp"

#include <cmath>
#include <complex>

#include "modw/errors.hpp"

namespace modw {

namespace {

double factorial(int n)
{
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

SpinMatrices build_spin_matrices(int f_spin)
{
  if (f_spin < 1) throw ConfigError("f_spin must be >= 1, got " + std::to_string(f_spin));
  SpinMatrices s;
  s.f = f_spin;
  const int d = s.dim();
  Eigen::MatrixXcd fp = Eigen::MatrixXcd::Zero(d, d);
  s.fz = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const int m = i - f_spin;
    s.fz(i, i) = m;
    if (i + 1 < d) fp(i + 1, i) = std::sqrt(double(f_spin * (f_spin + 1) - m * (m + 1)));
  }
  const Eigen::MatrixXcd fm = fp.adjoint();
  s.fx = 0.5 * (fp + fm);
  s.fy = std::complex<double>(0.0, -0.5) * (fp - fm);
  return s;
}

Eigen::MatrixXd wigner_small_d(int f, double beta)
{
  const int d = 2 * f + 1;
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  Eigen::MatrixXd out(d, d);
  for (int mp = -f; mp <= f; ++mp) {
    for (int m = -f; m <= f; ++m) {
      const double pre =
          std::sqrt(factorial(f + mp) * factorial(f - mp) * factorial(f + m) * factorial(f - m));
      double sum = 0.0;
      const int kmin = std::max(0, m - mp);
      const int kmax = std::min(f + m, f - mp);
      for (int k = kmin; k <= kmax; ++k) {
        const double den = factorial(f + m - k) * factorial(k) * factorial(f - k - mp) * factorial(k - m + mp);
        const double sign = ((k - m + mp) % 2 == 0) ? 1.0 : -1.0;
        sum += sign / den * std::pow(c, 2 * f - 2 * k + m - mp) * std::pow(s, 2 * k - m + mp);
      }
      out(mp + f, m + f) = pre * sum;
    }
  }
  return out;
}

Eigen::MatrixXcd spin_rotation_xz(int f, double axis_polar, double angle)
{
  const Eigen::MatrixXd dm = wigner_small_d(f, axis_polar);
  const int d = 2 * f + 1;
  Eigen::VectorXcd ph(d);
  for (int i = 0; i < d; ++i) ph(i) = std::polar(1.0, -angle * (i - f));
  return dm.cast<std::complex<double>>() * ph.asDiagonal() * dm.transpose().cast<std::complex<double>>();
}

Eigen::VectorXcd spin_coherent_state(int f, double theta, double phi)
{
  const int d = 2 * f + 1;
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Eigen::VectorXcd v(d);
  for (int m = -f; m <= f; ++m) {
    const double binom = factorial(2 * f) / (factorial(f + m) * factorial(f - m));
    const double amp = std::sqrt(binom) * std::pow(c, f + m) * std::pow(s, f - m);
    v(m + f) = std::polar(amp, -m * phi);
  }
  return v;
}

}  // namespace modw
