#include "modw/calibration.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "modw/adiabatic.hpp"
#include "modw/errors.hpp"
#include "modw/spectra.hpp"

namespace modw {

namespace {

constexpr double kWindowPenalty = 10.0;

bool feasible(const CalibrationCandidate& c, const CalibrationTargets& t)
{
  return c.double_well && c.barrier >= t.barrier_lo && c.barrier <= t.barrier_hi && c.split_exact >= t.split_lo &&
         c.split_exact <= t.split_hi;
}

}  // namespace

CalibrationCandidate evaluate_candidate(const LatticeParams& params, const CalibrationTargets& targets)
{
  CalibrationCandidate c;
  c.params = params;
  c.score = std::numeric_limits<double>::infinity();
  try {
    c.barrier = analyze_double_well(params).barrier;
    c.double_well = true;
  } catch (const CalibrationError&) {
    return c;
  }
  c.split_exact = full_hamiltonian_levels(params, targets.n_basis, 2, 1e-6).splitting();
  c.split_bo_gauge = bo_levels(params, 0, true, 256, 2, 1e-6).splitting();
  const double a = (c.split_exact - targets.split_target) / targets.split_target;
  const double b = (c.split_bo_gauge - targets.bo_split_target) / targets.bo_split_target;
  c.score = a * a + b * b;
  if (c.barrier < targets.barrier_lo || c.barrier > targets.barrier_hi) c.score += kWindowPenalty;
  if (c.split_exact < targets.split_lo || c.split_exact > targets.split_hi) c.score += kWindowPenalty;
  return c;
}

CalibrationResult calibrate(const LatticeParams& base, const SearchRange& u0, const SearchRange& theta_l,
                            const SearchRange& bx, const CalibrationTargets& targets)
{
  CalibrationResult out;
  out.best.score = std::numeric_limits<double>::infinity();
  std::ostringstream report;
  report.precision(10);
  for (int i = 0; i < std::max(u0.steps, 1); ++i)
    for (int j = 0; j < std::max(theta_l.steps, 1); ++j)
      for (int k = 0; k < std::max(bx.steps, 1); ++k) {
        LatticeParams p = base;
        p.u0 = u0.at(i);
        p.theta_l = theta_l.at(j);
        p.bx = bx.at(k);
        CalibrationCandidate c;
        try {
          c = evaluate_candidate(p, targets);
        } catch (const ResolutionError& e) {
          report << "u0=" << p.u0 << " theta_l=" << p.theta_l << " bx=" << p.bx << ": unresolved (" << e.what()
                 << ")\n";
          ++out.evaluated;
          continue;
        }
        ++out.evaluated;
        const bool ok = feasible(c, targets);
        report << "u0=" << p.u0 << " theta_l=" << p.theta_l << " bx=" << p.bx << " barrier=" << c.barrier
               << " split=" << c.split_exact << " bo_split=" << c.split_bo_gauge << (ok ? " feasible" : "") << '\n';
        const bool better = (ok && !out.feasible) || (ok == out.feasible && c.score < out.best.score);
        if (better) {
          out.best = c;
          out.feasible = ok;
        }
      }
  if (out.evaluated > 0 && std::isfinite(out.best.score)) {
    const CalibrationCandidate& b = out.best;
    report << (out.feasible ? "selected" : "infeasible; nearest miss") << ": u0=" << b.params.u0
           << " theta_l=" << b.params.theta_l << " bx=" << b.params.bx << " barrier=" << b.barrier
           << " split=" << b.split_exact << " bo_split=" << b.split_bo_gauge << " score=" << b.score << '\n';
  }
  out.report = report.str();
  return out;
}

}  // namespace modw
