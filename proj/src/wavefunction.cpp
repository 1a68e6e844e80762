#include "modw/wavefunction.hpp"

#include <fftw3.h>

#include "modw/errors.hpp"

namespace modw {

SpinorWavefunction::SpinorWavefunction(const PeriodicGrid& g, int dim)
    : grid(g), amps(Eigen::MatrixXcd::Zero(g.size(), dim))
{
}

double SpinorWavefunction::norm() const { return amps.squaredNorm() * grid.spacing(); }

void SpinorWavefunction::normalize()
{
  const double n = norm();
  if (!(n > 0.0)) throw NumericalError("cannot normalize a zero wavefunction");
  amps /= std::sqrt(n);
}

cplx SpinorWavefunction::inner(const SpinorWavefunction& other) const
{
  return (amps.conjugate().cwiseProduct(other.amps)).sum() * grid.spacing();
}

Eigen::VectorXd SpinorWavefunction::density() const { return amps.cwiseAbs2().rowwise().sum(); }

struct ColumnFft::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

ColumnFft::ColumnFft(int n, int columns) : n_(n), columns_(columns), plans_(std::make_unique<Plans>())
{
  Eigen::MatrixXcd scratch(n, columns);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->fwd = fftw_plan_many_dft(1, &n_, columns, buf, nullptr, 1, n, buf, nullptr, 1, n, FFTW_FORWARD, flags);
  plans_->bwd = fftw_plan_many_dft(1, &n_, columns, buf, nullptr, 1, n, buf, nullptr, 1, n, FFTW_BACKWARD, flags);
  if (!plans_->fwd || !plans_->bwd) throw NumericalError("FFTW planning failed");
}

ColumnFft::~ColumnFft()
{
  if (plans_) {
    if (plans_->fwd) fftw_destroy_plan(plans_->fwd);
    if (plans_->bwd) fftw_destroy_plan(plans_->bwd);
  }
}

void ColumnFft::forward(Eigen::MatrixXcd& data) const
{
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->fwd, buf, buf);
}

void ColumnFft::backward(Eigen::MatrixXcd& data) const
{
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->bwd, buf, buf);
  data /= static_cast<double>(n_);
}

}  // namespace modw
