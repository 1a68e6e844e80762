#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "modw/adiabatic.hpp"
#include "modw/errors.hpp"
#include "modw/params.hpp"
#include "modw/potential.hpp"
#include "modw/spin.hpp"

using namespace modw;
using std::numbers::pi;

namespace {

LatticeParams make(double u0, double theta, double bx)
{
  LatticeParams p;
  p.u0 = u0;
  p.theta_l = theta;
  p.bx = bx;
  return p;
}

Eigen::MatrixXcd comm(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return a * b - b * a; }

}  // namespace

TEST_CASE("spin matrices satisfy su(2) and the Casimir")
{
  const cplx i(0.0, 1.0);
  for (int f : {1, 2, 4}) {
    const SpinMatrices s = build_spin_matrices(f);
    CHECK(s.dim() == 2 * f + 1);
    CHECK(testing::max_abs_diff(comm(s.fx, s.fy), i * s.fz) < 1e-12);
    CHECK(testing::max_abs_diff(comm(s.fy, s.fz), i * s.fx) < 1e-12);
    CHECK(testing::max_abs_diff(comm(s.fz, s.fx), i * s.fy) < 1e-12);
    const Eigen::MatrixXcd c = s.fx * s.fx + s.fy * s.fy + s.fz * s.fz;
    const Eigen::MatrixXcd id = f * (f + 1.0) * Eigen::MatrixXcd::Identity(s.dim(), s.dim());
    CHECK(testing::max_abs_diff(c, id) < 1e-12);
    CHECK(testing::max_abs_diff(s.fx, s.fx.adjoint()) == 0.0);
  }
}

TEST_CASE("spin F=1 explicit entries")
{
  const SpinMatrices s = build_spin_matrices(1);
  CHECK(s.fz(0, 0).real() == doctest::Approx(-1.0));
  CHECK(s.fz(1, 1).real() == doctest::Approx(0.0));
  CHECK(s.fz(2, 2).real() == doctest::Approx(1.0));
  CHECK(s.fx(0, 1).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(s.fx(1, 2).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(std::abs(s.fx(0, 2)) == 0.0);
}

TEST_CASE("spin construction rejects F < 1")
{
  CHECK_THROWS_AS(build_spin_matrices(0), ConfigError);
  CHECK_THROWS_AS(build_spin_matrices(-2), ConfigError);
}

TEST_CASE("exp(-i pi Fy) flips m=+4 to m=-4 (dense exponential oracle)")
{
  const SpinMatrices s = build_spin_matrices(4);
  const Eigen::MatrixXcd u = testing::expm_i(s.fy, pi);
  Eigen::VectorXcd up = Eigen::VectorXcd::Zero(9);
  up(s.index(4)) = 1.0;
  const Eigen::VectorXcd out = u * up;
  CHECK(std::abs(out(s.index(-4))) == doctest::Approx(1.0).epsilon(1e-12));

  for (double beta : {0.3, 1.1, pi, 2.5}) {
    const Eigen::MatrixXd d = wigner_small_d(4, beta);
    CHECK(testing::max_abs_diff(d.cast<cplx>(), testing::expm_i(s.fy, beta)) < 1e-11);
  }
}

TEST_CASE("spin rotation and coherent state agree with dense exponentials")
{
  const int f = 4;
  const SpinMatrices s = build_spin_matrices(f);
  const double axis = 0.7, angle = 1.3;
  const Eigen::MatrixXcd gen = std::sin(axis) * s.fx + std::cos(axis) * s.fz;
  CHECK(testing::max_abs_diff(spin_rotation_xz(f, axis, angle), testing::expm_i(gen, angle)) < 1e-11);

  const double th = 1.2, ph = 2.1;
  const Eigen::VectorXcd n = spin_coherent_state(f, th, ph);
  const cplx ex = n.dot(s.fx * n), ey = n.dot(s.fy * n), ez = n.dot(s.fz * n);
  CHECK(ex.real() == doctest::Approx(f * std::sin(th) * std::cos(ph)).epsilon(1e-12));
  CHECK(ey.real() == doctest::Approx(f * std::sin(th) * std::sin(ph)).epsilon(1e-12));
  CHECK(ez.real() == doctest::Approx(f * std::cos(th)).epsilon(1e-12));
}

TEST_CASE("scalar potential examples")
{
  LatticeParams p = make(-3.0, pi / 2, 1.0);
  for (double z : {-1.0, 0.0, 0.4, 2.0}) CHECK(std::abs(scalar_potential(p, z)) < 1e-15);
  p = make(1.0, pi / 3, 0.0);
  CHECK(scalar_potential(p, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  p = default_params();
  for (double z : {-1.2, 0.1, 0.9}) {
    CHECK(scalar_potential(p, z + pi) == doctest::Approx(scalar_potential(p, z)).epsilon(1e-12));
    CHECK(fictitious_field(p, z + pi) == doctest::Approx(fictitious_field(p, z)).epsilon(1e-12));
  }
}

TEST_CASE("pendulum reduction identity over random draws")
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uz(-pi, pi), un(-1.0, 1.0), ut(0.01, pi - 0.01),
      uu(-300.0, 300.0);
  for (int k = 0; k < 100; ++k) {
    const LatticeParams p = make(uu(rng), ut(rng), 0.0);
    const double z = uz(rng), nz = un(rng);
    const PendulumForm pf = pendulum_form(p, nz);
    const double lhs = scalar_potential(p, z) + nz * fictitious_field(p, z);
    CHECK(std::abs(lhs - pf.amplitude * std::cos(2.0 * z + pf.phase)) < 1e-12 * std::max(1.0, std::abs(p.u0)));
    const double c = p.u0 * std::sqrt(4.0 * std::pow(std::cos(p.theta_l), 2) +
                                      nz * nz * std::pow(std::sin(p.theta_l), 2));
    CHECK(std::abs(std::abs(pf.amplitude) - std::abs(c)) < 1e-12 * std::abs(p.u0));
  }
}

TEST_CASE("potential matrix: Hermitian, trace, diagonal and rotated limits")
{
  const SpinMatrices s = build_spin_matrices(4);
  LatticeParams p = default_params();
  for (double z : {-1.3, -0.2, 0.0, 0.77}) {
    const Eigen::MatrixXcd v = potential_matrix(p, s, z);
    CHECK(testing::max_abs_diff(v, v.adjoint()) < 1e-13);
    CHECK(v.trace().real() == doctest::Approx(9.0 * scalar_potential(p, z)).epsilon(1e-12));
  }

  p.bx = 0.0;
  const double z = 0.4;
  const Eigen::MatrixXcd v = potential_matrix(p, s, z);
  CHECK((v - Eigen::MatrixXcd(v.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  for (int m = -4; m <= 4; ++m)
    CHECK(v(s.index(m), s.index(m)).real() ==
          doctest::Approx(scalar_potential(p, z) + m / 4.0 * fictitious_field(p, z)).epsilon(1e-12));

  // b_fict vanishes at zeta = 0: eigenvalues U_J + (m/F) b_x.
  p = default_params();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(potential_matrix(p, s, 0.0));
  for (int m = -4; m <= 4; ++m)
    CHECK(es.eigenvalues()(m + 4) ==
          doctest::Approx(scalar_potential(p, 0.0) + m / 4.0 * p.bx).epsilon(1e-12));
}

TEST_CASE("effective field and its derivative")
{
  const LatticeParams p = default_params();
  for (double z : {-0.9, 0.2, 1.4}) {
    const double h = 1e-5;
    const Eigen::Vector3d fd = (effective_field(p, z + h) - effective_field(p, z - h)) / (2 * h);
    CHECK((fd - effective_field_derivative(p, z)).norm() < 1e-6 * std::abs(p.u0));
    const double dv = (scalar_potential(p, z + h) - scalar_potential(p, z - h)) / (2 * h);
    CHECK(std::abs(dv - scalar_potential_derivative(p, z)) < 1e-6 * std::abs(p.u0));
    CHECK(lowest_adiabatic_potential(p, z) ==
          doctest::Approx(scalar_potential(p, z) - effective_field(p, z).norm()).epsilon(1e-14));
  }
}

TEST_CASE("adiabatic spectrum: diagonal branches when b_x = 0")
{
  LatticeParams p = make(-20.0, 1.1, 0.0);
  const SpinMatrices s = build_spin_matrices(4);
  const PeriodicGrid g = PeriodicGrid::for_lattice(p, 64);
  const AdiabaticSpectrum sp = adiabatic_spectrum(p, s, g);
  for (int i = 0; i < g.size(); ++i) {
    std::vector<double> expect;
    for (int m = -4; m <= 4; ++m)
      expect.push_back(scalar_potential(p, g.x(i)) + m / 4.0 * fictitious_field(p, g.x(i)));
    std::sort(expect.begin(), expect.end());
    for (int mu = 0; mu < 9; ++mu) CHECK(sp.potentials(i, mu) == doctest::Approx(expect[mu]).epsilon(1e-12));
  }
}

TEST_CASE("adiabatic spectrum: avoided crossings, phase continuity, symmetry")
{
  const LatticeParams p = default_params();
  const SpinMatrices s = build_spin_matrices(4);
  const PeriodicGrid g = PeriodicGrid::for_lattice(p, 256);
  const AdiabaticSpectrum sp = adiabatic_spectrum(p, s, g);

  double min_gap = 1e300;
  for (int i = 0; i < g.size(); ++i) min_gap = std::min(min_gap, sp.potentials(i, 1) - sp.potentials(i, 0));
  // |b| >= b_x everywhere, and adjacent bands are |b|/F apart.
  CHECK(min_gap >= p.bx / 4.0 - 1e-9);
  CHECK(min_gap > 0.0);

  for (int i = 1; i < g.size(); ++i)
    for (int mu = 0; mu < 9; ++mu) {
      const cplx ov = sp.basis(i - 1).col(mu).dot(sp.basis(i).col(mu));
      CHECK(ov.real() >= 0.0);
      CHECK(std::abs(ov.imag()) < 1e-10);
    }

  // V_mu(-zeta) = V_mu(zeta): |b| is even in zeta.
  for (int i = 1; i < g.size(); ++i) {
    const int j = g.size() - i;
    for (int mu = 0; mu < 9; ++mu) CHECK(sp.potentials(i, mu) == doctest::Approx(sp.potentials(j, mu)).epsilon(1e-10));
  }
}

TEST_CASE("adiabatic spectrum is bit-deterministic")
{
  const LatticeParams p = default_params();
  const SpinMatrices s = build_spin_matrices(4);
  const PeriodicGrid g = PeriodicGrid::for_lattice(p, 128);
  const AdiabaticSpectrum a = adiabatic_spectrum(p, s, g);
  const AdiabaticSpectrum b = adiabatic_spectrum(p, s, g);
  CHECK((a.potentials.array() == b.potentials.array()).all());
  for (int i = 0; i < g.size(); ++i) CHECK((a.basis(i).array() == b.basis(i).array()).all());
}

TEST_CASE("gauge potential of the lowest band equals (F/2) (d theta_b/d zeta)^2")
{
  // The lowest adiabatic spinor is a spin coherent state anti-aligned with b, so its
  // Fubini-Study metric is (F/2) times the squared rotation rate of the field direction.
  const LatticeParams p = default_params();
  const SpinMatrices s = build_spin_matrices(4);
  const PeriodicGrid g = PeriodicGrid::for_lattice(p, 512);
  const AdiabaticSpectrum sp = adiabatic_spectrum(p, s, g);
  const Eigen::VectorXd phi = gauge_correction(sp, 0);
  const double a = -p.u0 * std::sin(p.theta_l);
  double peak = 0.0;
  for (int i = 0; i < g.size(); ++i) peak = std::max(peak, phi(i));
  for (int i = 0; i < g.size(); ++i) {
    const double z = g.x(i);
    const double bf = a * std::sin(2 * z), dbf = 2 * a * std::cos(2 * z);
    const double rate = p.bx * dbf / (p.bx * p.bx + bf * bf);
    CHECK(std::abs(phi(i) - 2.0 * rate * rate) < 1e-6 * peak);
    CHECK(phi(i) >= 0.0);
  }
}

TEST_CASE("gauge potential is invariant under a smooth eigenvector rephasing")
{
  const LatticeParams p = default_params();
  const SpinMatrices s = build_spin_matrices(4);
  const PeriodicGrid g = PeriodicGrid::for_lattice(p, 256);
  const AdiabaticSpectrum sp = adiabatic_spectrum(p, s, g);
  AdiabaticSpectrum twisted = sp;
  for (int i = 0; i < g.size(); ++i)
    for (int mu = 0; mu < 9; ++mu)
      twisted.eigenvectors[i].col(mu) *= std::polar(1.0, 0.3 * mu + std::sin(2.0 * g.x(i)) * (mu + 1));
  for (int mu : {0, 1, 4}) {
    const Eigen::VectorXd a = gauge_correction(sp, mu);
    const Eigen::VectorXd b = gauge_correction(twisted, mu);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("gauge potential: peak at fastest field rotation, convergence, adiabatic limit")
{
  LatticeParams p = default_params();
  const SpinMatrices s = build_spin_matrices(4);
  const PeriodicGrid g = PeriodicGrid::for_lattice(p, 256);
  const Eigen::VectorXd phi = gauge_correction(adiabatic_spectrum(p, s, g), 0);
  int arg = 0, arg_rate = 0;
  for (int i = 0; i < g.size(); ++i) {
    if (phi(i) > phi(arg)) arg = i;
    if (std::abs(field_rotation_rate(p, g.x(i))) > std::abs(field_rotation_rate(p, g.x(arg_rate)))) arg_rate = i;
  }
  CHECK(arg == arg_rate);

  const PeriodicGrid g2 = PeriodicGrid::for_lattice(p, 512);
  const Eigen::VectorXd phi2 = gauge_correction(adiabatic_spectrum(p, s, g2), 0);
  double diff = 0.0;
  for (int i = 0; i < g.size(); ++i) diff = std::max(diff, std::abs(phi(i) - phi2(2 * i)));
  CHECK(diff < 1e-6 * phi.maxCoeff());

  double prev = phi.maxCoeff();
  for (double bx : {400.0, 1600.0, 6400.0}) {
    p.bx = bx;
    const double m = gauge_correction(adiabatic_spectrum(p, s, g), 0).maxCoeff();
    CHECK(m < prev);
    prev = m;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("gauge potential vanishes away from crossings when b_x = 0")
{
  const LatticeParams p = make(-20.0, 1.1, 0.0);
  const SpinMatrices s = build_spin_matrices(4);
  const PeriodicGrid g = PeriodicGrid::for_lattice(p, 128);
  const AdiabaticSpectrum sp = adiabatic_spectrum(p, s, g);
  // Crossings sit at b_fict = 0 (zeta = 0, +-pi/2); use points well inside the branches.
  const double z0 = 0.7;
  const int i0 = static_cast<int>(std::lround((z0 - g.start()) / g.spacing()));
  for (int mu = 0; mu < 9; ++mu) {
    try {
      const Eigen::VectorXd phi = gauge_correction(sp, mu, 0.0);
      for (int i = i0 - 3; i <= i0 + 3; ++i) CHECK(std::abs(phi(i)) < 1e-12);
    } catch (const ResolutionError&) {
      FAIL("unexpected resolution error");
    }
  }
}

TEST_CASE("gauge potential rejects a coarse grid")
{
  LatticeParams p = default_params();
  p.bx = 2.0;  // field direction flips within a few grid cells
  const SpinMatrices s = build_spin_matrices(4);
  const PeriodicGrid g = PeriodicGrid::for_lattice(p, 16);
  CHECK_THROWS_AS(gauge_correction(adiabatic_spectrum(p, s, g), 0), ResolutionError);
}

TEST_CASE("double well of the default parameters")
{
  const LatticeParams p = default_params();
  const DoubleWell w = analyze_double_well(p);
  CHECK(w.left_min < w.barrier_pos);
  CHECK(w.barrier_pos < w.right_min);
  CHECK(w.barrier > w.left_value);
  CHECK(w.barrier > w.right_value);
  CHECK(w.barrier >= -192.0);
  CHECK(w.barrier <= -186.0);
  CHECK(w.curvature_left > 0.0);
  // The closed-form V_1 agrees with the diagonalized lowest band at the landmarks.
  const SpinMatrices s = build_spin_matrices(4);
  for (double z : {w.left_min, w.barrier_pos, w.right_min}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(potential_matrix(p, s, z), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) == doctest::Approx(lowest_adiabatic_potential(p, z)).epsilon(1e-12));
  }
  CHECK(lowest_adiabatic_potential(p, w.barrier_pos) == doctest::Approx(w.barrier).epsilon(1e-12));
}

TEST_CASE("single-well potential is rejected")
{
  const LatticeParams p = make(-1.0, 1.2, 1000.0);
  CHECK_THROWS_AS(analyze_double_well(p), CalibrationError);
}

TEST_CASE("parameter validation")
{
  LatticeParams p = default_params();
  CHECK_NOTHROW(p.validate());
  p.u0 = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_NOTHROW(p.validate_allow_free());
  p = default_params();
  p.theta_l = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = default_params();
  p.bx = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = default_params();
  p.f_spin = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("key-value config parsing reports keys and lines")
{
  const KeyValueConfig cfg = KeyValueConfig::parse_string(
      "# comment\n"
      "u0 = -100\n"
      "\n"
      "theta_l_deg = 60   # inline\n"
      "bx = oops\n");
  CHECK(cfg.get_double("u0") == -100.0);
  CHECK(cfg.get_double("theta_l_deg") == 60.0);
  try {
    (void)cfg.get_double("bx");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bx") != std::string::npos);
    CHECK(msg.find("line 5") != std::string::npos);
  }
  CHECK_THROWS_AS(cfg.require({"u0", "f_spin"}), ConfigError);
  CHECK_THROWS_AS(cfg.reject_unknown({"u0", "bx"}), ConfigError);
  CHECK_THROWS_AS(params_from_config(cfg), ConfigError);

  const LatticeParams p = params_from_config(KeyValueConfig::parse_string("u0 = -10\ntheta_l_deg = 90\nbx = 2\n"));
  CHECK(p.theta_l == doctest::Approx(pi / 2));
  CHECK(p.f_spin == 4);
}
