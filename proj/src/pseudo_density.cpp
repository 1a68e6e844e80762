#include "modw/pseudo_density.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/laguerre.hpp>

#include "modw/errors.hpp"
#include "modw/quadrature.hpp"
#include "modw/spin.hpp"

namespace modw {

namespace {

constexpr std::size_t kChunk = 2048;

// Rows = motional pairs (a, b) in row-major order, columns = row-major vec of the spin block.
Eigen::MatrixXcd to_pairs(const Eigen::MatrixXcd& x, int nm, int ds)
{
  Eigen::MatrixXcd r(nm * nm, ds * ds);
  for (int a = 0; a < nm; ++a)
    for (int b = 0; b < nm; ++b)
      for (int s = 0; s < ds; ++s)
        for (int t = 0; t < ds; ++t) r(a * nm + b, s * ds + t) = x(a * ds + s, b * ds + t);
  return r;
}

Eigen::MatrixXcd from_pairs(const Eigen::MatrixXcd& r, int nm, int ds)
{
  Eigen::MatrixXcd x(nm * ds, nm * ds);
  for (int a = 0; a < nm; ++a)
    for (int b = 0; b < nm; ++b)
      for (int s = 0; s < ds; ++s)
        for (int t = 0; t < ds; ++t) x(a * ds + s, b * ds + t) = r(a * nm + b, s * ds + t);
  return x;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

double PseudoDensity::expectation(const Eigen::VectorXcd& v) const { return v.dot(matrix * v).real(); }

Eigen::MatrixXcd spin_gram_matrix(int f_spin)
{
  const int ds = 2 * f_spin + 1;
  const GaussRule g = gauss_legendre(16);
  const int n_phi = 8 * f_spin + 8;
  const double pref = (2.0 * f_spin + 1.0) / (4.0 * std::numbers::pi);
  Eigen::MatrixXcd gm = Eigen::MatrixXcd::Zero(ds * ds, ds * ds);
  Eigen::VectorXcd v(ds * ds);
  for (std::size_t a = 0; a < g.nodes.size(); ++a)
    for (int b = 0; b < n_phi; ++b) {
      const double w = pref * g.weights[a] * 2.0 * std::numbers::pi / n_phi;
      const Eigen::VectorXcd n = spin_coherent_state(f_spin, std::acos(g.nodes[a]), 2.0 * std::numbers::pi * b / n_phi);
      for (int s = 0; s < ds; ++s)
        for (int t = 0; t < ds; ++t) v(s * ds + t) = n(s) * std::conj(n(t));
      gm.noalias() += w * v * v.adjoint();
    }
  return gm;
}

PseudoDensityReconstructor::PseudoDensityReconstructor(int f_spin, const ReconstructionOptions& options)
    : options_(options), f_(f_spin), spin_dim_(2 * f_spin + 1)
{
  if (options.n_max < 1) throw ConfigError("n_max must be >= 1");
  if (!(options.regularization > 0.0)) throw ConfigError("regularization must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ss(spin_gram_matrix(f_spin));
  spin_vecs_ = ss.eigenvectors();
  spin_vals_ = ss.eigenvalues();
  const int nm = options.n_max + 1;
  double gmax = 0.0;
  for (int l = 0; l < nm; ++l) {
    const int m = nm - l;
    Eigen::MatrixXd g(m, m);
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a) {
        const int k = c + a + l;
        g(c, a) = std::exp(log_factorial(k) - (k + 1) * std::log(2.0) -
                           0.5 * (log_factorial(a) + log_factorial(a + l) + log_factorial(c) + log_factorial(c + l)));
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(g);
    mot_vecs_.push_back(ms.eigenvectors());
    mot_vals_.push_back(ms.eigenvalues().cwiseMax(0.0));
    gmax = std::max(gmax, ms.eigenvalues().maxCoeff());
  }
  lambda_ = options.regularization * gmax * spin_vals_.maxCoeff();
}

namespace {

// Applies f(motional eigenvalue * spin eigenvalue) in the joint eigenbasis.
template <class F>
Eigen::MatrixXcd apply_spectral(const Eigen::MatrixXcd& x, int nm, int ds, const Eigen::MatrixXcd& spin_vecs,
                                const Eigen::VectorXd& spin_vals, const std::vector<Eigen::MatrixXd>& mot_vecs,
                                const std::vector<Eigen::VectorXd>& mot_vals, F&& f)
{
  Eigen::MatrixXcd r = to_pairs(x, nm, ds) * spin_vecs.conjugate();
  for (int l = -(nm - 1); l <= nm - 1; ++l) {
    const int al = std::abs(l);
    const int m = nm - al;
    Eigen::MatrixXcd z(m, ds * ds);
    auto pair_row = [&](int i) { return l >= 0 ? i * nm + (i + al) : (i + al) * nm + i; };
    for (int i = 0; i < m; ++i) z.row(i) = r.row(pair_row(i));
    Eigen::MatrixXcd y = mot_vecs[static_cast<std::size_t>(al)].transpose().cast<cplx>() * z;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < ds * ds; ++j) y(i, j) *= f(mot_vals[static_cast<std::size_t>(al)](i) * spin_vals(j));
    z = mot_vecs[static_cast<std::size_t>(al)].cast<cplx>() * y;
    for (int i = 0; i < m; ++i) r.row(pair_row(i)) = z.row(i);
  }
  return from_pairs(r * spin_vecs.transpose(), nm, ds);
}

}  // namespace

Eigen::MatrixXcd PseudoDensityReconstructor::gram(const Eigen::MatrixXcd& rho) const
{
  return apply_spectral(rho, options_.n_max + 1, spin_dim_, spin_vecs_, spin_vals_, mot_vecs_, mot_vals_,
                        [](double g) { return g; });
}

Eigen::MatrixXcd PseudoDensityReconstructor::solve(const Eigen::MatrixXcd& rhs) const
{
  const double lam = lambda_;
  return apply_spectral(rhs, options_.n_max + 1, spin_dim_, spin_vecs_, spin_vals_, mot_vecs_, mot_vals_,
                        [lam](double g) { return 1.0 / (g + lam); });
}

Eigen::VectorXcd PseudoDensityReconstructor::coherent_vector(cplx alpha, double theta, double phi) const
{
  const Eigen::VectorXcd a = fock_coherent_vector(alpha, options_.n_max);
  const Eigen::VectorXcd n = spin_coherent_state(f_, theta, phi);
  Eigen::VectorXcd v(dim());
  for (int i = 0; i <= options_.n_max; ++i) v.segment(i * spin_dim_, spin_dim_) = a(i) * n;
  return v;
}

Eigen::MatrixXcd PseudoDensityReconstructor::data_operator(const Ensemble& ensemble, const HarmonicFrame& frame) const
{
  const double wsum = ensemble.total_weight();
  if (!(wsum > 0.0)) throw DomainError("empty ensemble");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
  Eigen::MatrixXcd block(dim(), static_cast<Eigen::Index>(kChunk));
  for (std::size_t start = 0; start < ensemble.size(); start += kChunk) {
    const std::size_t end = std::min(ensemble.size(), start + kChunk);
    const auto cols = static_cast<Eigen::Index>(end - start);
    for (std::size_t i = start; i < end; ++i) {
      const ClassicalState& s = ensemble.samples[i];
      block.col(static_cast<Eigen::Index>(i - start)) =
          std::sqrt(ensemble.weights[i] / wsum) * coherent_vector(frame.to_alpha(s.zeta, s.p), s.theta(), s.phi());
    }
    m.selfadjointView<Eigen::Lower>().rankUpdate(block.leftCols(cols));
  }
  m.triangularView<Eigen::StrictlyUpper>() = m.adjoint();
  return m;
}

PseudoDensity PseudoDensityReconstructor::reconstruct(const Eigen::MatrixXcd& data) const
{
  const Eigen::MatrixXcd rm = solve(data);
  const Eigen::MatrixXcd ri = solve(Eigen::MatrixXcd::Identity(dim(), dim()));
  const double tr_m = rm.trace().real();
  const double nu = (1.0 - tr_m) / ri.trace().real();
  Eigen::MatrixXcd rho = rm + nu * ri;
  PseudoDensity out = finalize_pseudo_density(rho, options_.n_max, spin_dim_);
  const double mn = data.norm();
  out.residual = mn > 0.0 ? (gram(out.matrix) - data).norm() / mn : 0.0;
  out.recovered_mass = tr_m / data.trace().real();
  out.condition = 1.0 / options_.regularization;
  if (out.residual > options_.max_residual) {
    std::ostringstream os;
    os << "pseudo-density residual " << out.residual << " exceeds " << options_.max_residual
       << "; use more samples or a smaller n_max";
    throw IllPosedError(os.str());
  }
  return out;
}

PseudoDensity PseudoDensityReconstructor::reconstruct(const Ensemble& ensemble, const HarmonicFrame& frame) const
{
  return reconstruct(data_operator(ensemble, frame));
}

PseudoDensity finalize_pseudo_density(Eigen::MatrixXcd rho, int n_max, int spin_dim)
{
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (!(std::abs(tr) > 0.0)) throw NumericalError("pseudo-density has zero trace");
  rho /= tr;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  PseudoDensity out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.matrix = std::move(rho);
  out.n_max = n_max;
  out.spin_dim = spin_dim;
  out.trace = out.matrix.trace().real();
  return out;
}

Eigen::MatrixXcd displacement_matrix(cplx beta, int n_max)
{
  const double x = std::norm(beta);
  const double e = std::exp(-0.5 * x);
  Eigen::MatrixXcd d(n_max + 1, n_max + 1);
  for (int m = 0; m <= n_max; ++m)
    for (int n = 0; n <= n_max; ++n) {
      if (m >= n) {
        const double pre = std::exp(0.5 * (log_factorial(n) - log_factorial(m)));
        d(m, n) = pre * std::pow(beta, m - n) * e * boost::math::laguerre(n, m - n, x);
      } else {
        const double pre = std::exp(0.5 * (log_factorial(m) - log_factorial(n)));
        d(m, n) = pre * std::pow(-std::conj(beta), n - m) * e * boost::math::laguerre(m, n - m, x);
      }
    }
  return d;
}

PseudoDensity reconstruct_by_deconvolution(const Ensemble& ensemble, const HarmonicFrame& frame, int f_spin,
                                           const DeconvolutionOptions& options)
{
  const int ds = 2 * f_spin + 1;
  const int nm = options.n_max + 1;
  const double wsum = ensemble.total_weight();
  if (!(wsum > 0.0)) throw DomainError("empty ensemble");

  // Spin coefficients c_s = G_spin^-1 vec(|n_s><n_s|).
  const Eigen::MatrixXcd ginv = spin_gram_matrix(f_spin).inverse();
  const auto ns = static_cast<Eigen::Index>(ensemble.size());
  Eigen::MatrixXcd coef(ns, ds * ds);
  std::vector<cplx> alpha(ensemble.size());
  Eigen::VectorXcd v(ds * ds);
  for (Eigen::Index s = 0; s < ns; ++s) {
    const ClassicalState& st = ensemble.samples[static_cast<std::size_t>(s)];
    const Eigen::VectorXcd n = spin_coherent_state(f_spin, st.theta(), st.phi());
    for (int a = 0; a < ds; ++a)
      for (int b = 0; b < ds; ++b) v(a * ds + b) = n(a) * std::conj(n(b));
    coef.row(s) = (ensemble.weights[static_cast<std::size_t>(s)] / wsum) * (ginv * v).transpose();
    alpha[static_cast<std::size_t>(s)] = frame.to_alpha(st.zeta, st.p);
  }

  // Characteristic-function nodes inside the disc.
  std::vector<cplx> betas;
  const double db = 2.0 * options.beta_cut / (options.n_beta - 1);
  for (int i = 0; i < options.n_beta; ++i)
    for (int j = 0; j < options.n_beta; ++j) {
      const cplx b(-options.beta_cut + i * db, -options.beta_cut + j * db);
      if (std::abs(b) <= options.beta_cut) betas.push_back(b);
    }
  const auto nb = static_cast<Eigen::Index>(betas.size());
  Eigen::MatrixXcd phase(nb, ns);
  for (Eigen::Index k = 0; k < nb; ++k)
    for (Eigen::Index s = 0; s < ns; ++s) {
      const cplx b = betas[static_cast<std::size_t>(k)];
      const cplx a = alpha[static_cast<std::size_t>(s)];
      phase(k, s) = std::exp(b * std::conj(a) - std::conj(b) * a);
    }
  const Eigen::MatrixXcd chi = phase * coef;  // nb x ds^2

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(nm * ds, nm * ds);
  const double area = db * db / std::numbers::pi;
  for (Eigen::Index k = 0; k < nb; ++k) {
    const cplx b = betas[static_cast<std::size_t>(k)];
    const Eigen::MatrixXcd dm = displacement_matrix(-b, options.n_max) * (area * std::exp(0.5 * std::norm(b)));
    for (int s = 0; s < ds; ++s)
      for (int t = 0; t < ds; ++t) {
        const cplx c = chi(k, s * ds + t);
        for (int a = 0; a < nm; ++a)
          for (int bb = 0; bb < nm; ++bb) rho(a * ds + s, bb * ds + t) += dm(a, bb) * c;
      }
  }
  return finalize_pseudo_density(std::move(rho), options.n_max, ds);
}

double noise_floor(const std::vector<PseudoDensity>& controls)
{
  double f = 0.0;
  for (const auto& c : controls) f = std::max(f, -c.min_eigenvalue());
  return f;
}

}  // namespace modw
