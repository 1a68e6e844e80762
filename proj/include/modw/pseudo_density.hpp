#pragma once

#include <vector>

#include <Eigen/Dense>

#include "modw/coherent.hpp"
#include "modw/ensemble.hpp"

namespace modw {

/// Operator on (Fock 0..n_max) x (2F+1), motional index major:
/// row (a, m) sits at a * dim + (m + F).
struct PseudoDensity {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXd eigenvalues;  ///< descending
  int n_max = 0;
  int spin_dim = 0;
  double trace = 0.0;
  /// || G(rho) - M || / || M ||: misfit of the Husimi data left by regularization
  /// and the trace constraint.
  double residual = 0.0;
  /// Trace of the unconstrained solution relative to the ensemble weight; the share
  /// of the Q mass captured by the truncated space.
  double recovered_mass = 0.0;
  double condition = 0.0;  ///< largest Gram eigenvalue over the regularization

  double min_eigenvalue() const { return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0; }
  /// <v|rho|v> for a vector in the same layout.
  double expectation(const Eigen::VectorXcd& v) const;
};

struct ReconstructionOptions {
  int n_max = 48;
  /// Tikhonov parameter relative to the largest eigenvalue of the Gram map.
  double regularization = 1e-6;
  /// IllPosedError when the residual exceeds this.
  double max_residual = 0.5;
};

/// Regularized least-squares inversion of Husimi data.
///
/// Minimises  int (Tr[rho P(l)] - Q(l))^2 dmu(l) + lambda ||rho||^2  over Hermitian rho with
/// Tr rho = 1, where P(l) is the coherent projector truncated to the Fock cutoff and
/// mu the full phase-space measure. The Gram map G(rho) = int P Tr[rho P] dmu factorizes
/// into a motional part (block diagonal in the Fock off-diagonal index, closed form)
/// and a 81 x 81 spin part (exact quadrature), so (G + lambda)^-1 is applied through
/// their eigendecompositions. The data enter through M = sum_s w_s P(l_s).
class PseudoDensityReconstructor {
 public:
  PseudoDensityReconstructor(int f_spin, const ReconstructionOptions& options = {});

  PseudoDensity reconstruct(const Ensemble& ensemble, const HarmonicFrame& frame) const;
  /// Same from a precomputed data operator M (normalized to unit weight).
  PseudoDensity reconstruct(const Eigen::MatrixXcd& data) const;

  /// M = sum_s w_s |l_s><l_s| / sum_s w_s in the truncated space.
  Eigen::MatrixXcd data_operator(const Ensemble& ensemble, const HarmonicFrame& frame) const;
  /// Gram map applied to an operator.
  Eigen::MatrixXcd gram(const Eigen::MatrixXcd& rho) const;
  /// (G + lambda)^-1 applied to an operator.
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;

  /// Truncated |alpha> (x) |n(theta, phi)> in the operator layout.
  Eigen::VectorXcd coherent_vector(cplx alpha, double theta, double phi) const;

  int dim() const { return (options_.n_max + 1) * spin_dim_; }
  int spin_dim() const { return spin_dim_; }
  const ReconstructionOptions& options() const { return options_; }
  double lambda() const { return lambda_; }

 private:
  ReconstructionOptions options_;
  int f_;
  int spin_dim_;
  double lambda_ = 0.0;
  Eigen::MatrixXcd spin_vecs_;    ///< 81 x 81 eigenvectors of the spin Gram map
  Eigen::VectorXd spin_vals_;
  std::vector<Eigen::MatrixXd> mot_vecs_;  ///< per |l| = 0..n_max
  std::vector<Eigen::VectorXd> mot_vals_;
};

/// Spin Gram map as an (dim^2 x dim^2) matrix acting on row-major vec(sigma):
/// G(sigma) = (2F+1)/(4 pi) int |n><n| <n|sigma|n> dOmega.
Eigen::MatrixXcd spin_gram_matrix(int f_spin);

struct DeconvolutionOptions {
  int n_max = 24;
  double beta_cut = 3.0;  ///< radius of the characteristic-function disc
  int n_beta = 32;        ///< Cartesian points per axis on [-beta_cut, beta_cut]
};

/// Validation backend: Gaussian deconvolution of the motional Husimi function in
/// the characteristic-function domain (chi_rho = exp(|beta|^2/2) chi_Q, low-pass
/// at beta_cut) followed by the inverse Weyl map, with the spin part inverted
/// exactly through the spin Gram map.
PseudoDensity reconstruct_by_deconvolution(const Ensemble& ensemble, const HarmonicFrame& frame,
                                           int f_spin, const DeconvolutionOptions& options = {});

/// Matrix elements <m|D(beta)|n>, m, n = 0..n_max.
Eigen::MatrixXcd displacement_matrix(cplx beta, int n_max);

/// Hermitian part, unit trace and descending eigenvalues.
PseudoDensity finalize_pseudo_density(Eigen::MatrixXcd rho, int n_max, int spin_dim);

/// Empirical noise floor: largest |most negative eigenvalue| over control results.
double noise_floor(const std::vector<PseudoDensity>& controls);

}  // namespace modw
