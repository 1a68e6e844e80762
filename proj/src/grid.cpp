#include "modw/grid.hpp"

#include <cmath>
#include <numbers>

#include "modw/errors.hpp"

namespace modw {

PeriodicGrid::PeriodicGrid(int n, double length) : n_(n), length_(length)
{
  if (n < 2) throw ConfigError("grid needs at least two points");
  if (!(length > 0.0)) throw ConfigError("grid length must be positive");
}

PeriodicGrid PeriodicGrid::for_lattice(const LatticeParams& params, int n)
{
  return PeriodicGrid(n, params.domain_length());
}

Eigen::VectorXd PeriodicGrid::points() const
{
  Eigen::VectorXd z(n_);
  for (int i = 0; i < n_; ++i) z(i) = x(i);
  return z;
}

Eigen::VectorXd PeriodicGrid::wavenumbers() const
{
  Eigen::VectorXd k(n_);
  const double dk = 2.0 * std::numbers::pi / length_;
  for (int j = 0; j < n_; ++j) k(j) = dk * (j < (n_ + 1) / 2 ? j : j - n_);
  return k;
}

double PeriodicGrid::wrap_displacement(double dx) const
{
  return dx - length_ * std::floor(dx / length_ + 0.5);
}

}  // namespace modw
