#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "modw/evolution.hpp"
#include "modw/params.hpp"
#include "modw/wavefunction.hpp"

namespace testing {

using modw::cplx;

// Dense exp(-i H t) by Pade scaling and squaring (independent of the library's
// closed-form rotations).
inline Eigen::MatrixXcd expm_i(const Eigen::MatrixXcd& h, double t)
{
  const Eigen::MatrixXcd a = cplx(0.0, -t) * h;
  return a.exp();
}

// Dense grid Hamiltonian assembled column by column from SpinorHamiltonian::apply.
inline Eigen::MatrixXcd dense_hamiltonian(const modw::SpinorHamiltonian& h, int dim)
{
  const int n = h.grid().size();
  const int size = n * dim;
  Eigen::MatrixXcd out(size, size);
  modw::SpinorWavefunction e(h.grid(), dim);
  const double scale = 1.0 / std::sqrt(h.grid().spacing());
  for (int c = 0; c < size; ++c) {
    e.amps.setZero();
    e.amps(c % n, c / n) = scale;
    const modw::SpinorWavefunction he = h.apply(e);
    for (int r = 0; r < size; ++r) out(r, c) = he.amps(r % n, r / n) / scale;
  }
  return out;
}

// Column-major (grid index fastest) vector <-> wavefunction.
inline modw::SpinorWavefunction from_vector(const modw::PeriodicGrid& g, int dim,
                                            const Eigen::VectorXcd& v)
{
  modw::SpinorWavefunction psi(g, dim);
  for (int c = 0; c < dim; ++c)
    for (int i = 0; i < g.size(); ++i) psi.amps(i, c) = v(c * g.size() + i);
  psi.normalize();
  return psi;
}

inline modw::SpinorWavefunction random_smooth_state(const modw::PeriodicGrid& g, int dim,
                                                    std::mt19937_64& rng, int modes = 6)
{
  std::normal_distribution<double> nd;
  modw::SpinorWavefunction psi(g, dim);
  for (int c = 0; c < dim; ++c)
    for (int k = -modes; k <= modes; ++k) {
      const cplx a(nd(rng), nd(rng));
      const double kk = 2.0 * std::numbers::pi * k / g.length();
      for (int i = 0; i < g.size(); ++i) psi.amps(i, c) += a * std::polar(1.0, kk * g.x(i));
    }
  psi.normalize();
  return psi;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing
