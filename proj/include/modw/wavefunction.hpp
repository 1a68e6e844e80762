#pragma once

#include <complex>
#include <memory>

#include <Eigen/Dense>

#include "modw/grid.hpp"

namespace modw {

using cplx = std::complex<double>;

/// Spinor field psi_m(zeta_i) on a periodic grid; column m + F holds component m.
/// Normalization: sum_{i,m} |psi|^2 * dzeta = 1.
struct SpinorWavefunction {
  PeriodicGrid grid;
  Eigen::MatrixXcd amps;  ///< grid.size() x (2F+1)

  SpinorWavefunction() = default;
  SpinorWavefunction(const PeriodicGrid& g, int dim);

  int dim() const { return static_cast<int>(amps.cols()); }
  int spin() const { return (dim() - 1) / 2; }
  double norm() const;
  void normalize();
  /// <this|other> including the dzeta measure.
  cplx inner(const SpinorWavefunction& other) const;
  /// Total position density sum_m |psi_m|^2 at each grid point.
  Eigen::VectorXd density() const;
};

/// Column-wise complex FFT of an N x M matrix (FFTW, estimate-mode plans).
/// Plans are built once; execute() is not thread-safe on a shared instance.
class ColumnFft {
 public:
  ColumnFft(int n, int columns);
  ~ColumnFft();
  ColumnFft(const ColumnFft&) = delete;
  ColumnFft& operator=(const ColumnFft&) = delete;

  /// Unnormalized forward transform, in place.
  void forward(Eigen::MatrixXcd& data) const;
  /// Inverse transform including the 1/N factor, in place.
  void backward(Eigen::MatrixXcd& data) const;

  int size() const { return n_; }
  int columns() const { return columns_; }

 private:
  struct Plans;
  int n_;
  int columns_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace modw
