#include "modw/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "modw/errors.hpp"
#include "modw/rng.hpp"
#include "modw/section.hpp"
#include "modw/units.hpp"

namespace modw {

namespace {

double distance(const ClassicalState& a, const ClassicalState& b)
{
  const double dz = a.zeta - b.zeta;
  const double dp = a.p - b.p;
  return std::sqrt(dz * dz + dp * dp + (a.n - b.n).squaredNorm());
}

// b <- a + (b - a) * scale, with the spin projected back to the sphere.
void rescale(const ClassicalState& a, ClassicalState& b, double scale)
{
  b.zeta = a.zeta + (b.zeta - a.zeta) * scale;
  b.p = a.p + (b.p - a.p) * scale;
  b.n = (a.n + (b.n - a.n) * scale).normalized();
}

}  // namespace

LyapunovResult lyapunov(const LatticeParams& params, const ClassicalState& state,
                        const LyapunovOptions& options)
{
  if (!(options.renorm_interval > 0.0) || !(options.tau_total > 2.0 * options.renorm_interval))
    throw ConfigError("lyapunov: tau_total must exceed twice the renormalization interval");
  const ClassicalIntegrator integ(params, options.integrator.order);
  const double d0 = options.initial_separation;

  ClassicalState a = state;
  // Initial offset along a fixed mixed direction in (zeta, p, n).
  ClassicalState b = state;
  const Eigen::Vector3d t1 = state.n.unitOrthogonal();
  const Eigen::Vector3d t2 = state.n.cross(t1);
  b.zeta += 0.5 * d0;
  b.p += 0.5 * d0;
  b.n = (b.n + 0.5 * d0 * t1 + 0.5 * d0 * t2).normalized();
  rescale(a, b, d0 / distance(a, b));

  const long blocks = static_cast<long>(std::floor(options.tau_total / options.renorm_interval + 1e-9));
  LyapunovResult r;
  double sum = 0.0;
  for (long k = 1; k <= blocks; ++k) {
    integ.advance(a, options.renorm_interval, options.integrator.dtau);
    integ.advance(b, options.renorm_interval, options.integrator.dtau);
    const double d = distance(a, b);
    if (!(d > 0.0) || !std::isfinite(d)) throw NumericalError("lyapunov: degenerate separation");
    sum += std::log(d / d0);
    rescale(a, b, d0 / d);
    const double t = k * options.renorm_interval;
    r.times.push_back(t);
    r.running.push_back(sum / t);
  }
  const std::size_t half = r.running.size() / 2;
  double mean = 0.0, lo = 1e300, hi = -1e300;
  for (std::size_t i = half; i < r.running.size(); ++i) {
    mean += r.running[i];
    lo = std::min(lo, r.running[i]);
    hi = std::max(hi, r.running[i]);
  }
  mean /= static_cast<double>(r.running.size() - half);
  r.exponent = mean;
  r.per_second = units::rate_to_per_second(mean);
  const double spread = hi - lo;
  r.converged = spread < 0.05 * std::abs(mean) || spread < 1.0 / options.tau_total;
  return r;
}

ShellLyapunovSurvey lyapunov_survey(const LatticeParams& params, double energy, int trials,
                                    std::uint64_t seed, const LyapunovOptions& options,
                                    double chaotic_threshold)
{
  ShellLyapunovSurvey s;
  std::vector<double> chaotic;
  for (int i = 0; i < trials; ++i) {
    const ClassicalState st = sample_shell_state(params, energy, derive_seed(seed, i));
    s.states.push_back(st);
    s.results.push_back(lyapunov(params, st, options));
    if (s.results.back().exponent > chaotic_threshold) chaotic.push_back(s.results.back().exponent);
  }
  s.chaotic_count = static_cast<int>(chaotic.size());
  if (!chaotic.empty()) {
    std::sort(chaotic.begin(), chaotic.end());
    const std::size_t m = chaotic.size();
    s.chaotic_median = m % 2 ? chaotic[m / 2] : 0.5 * (chaotic[m / 2 - 1] + chaotic[m / 2]);
  }
  return s;
}

}  // namespace modw
