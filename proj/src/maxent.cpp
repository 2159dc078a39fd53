#include "egt/maxent.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace egt {
namespace {

constexpr double kIdentityTolerance = 1e-5;

struct GibbsMoments {
  double log_Z = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double third_central = 0.0;
  double entropy = 0.0;
};

// Max-shift log-sum-exp evaluation of the canonical moments. The shifted
// leading weight is exactly one, so ln(norm) goes through log1p of the tail
// sum; this keeps ln Z relatively accurate even when the ensemble is frozen
// onto its ground state and the tail is exponentially small.
GibbsMoments moments_at(const Vector& levels, double beta) {
  const Vector t = -beta * levels;
  Eigen::Index leader = 0;
  const double shift = t.maxCoeff(&leader);
  const Vector w = (t.array() - shift).exp();
  const double norm = w.sum();
  const Vector p = w / norm;
  double tail = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (i != leader) tail += w(i);
  }

  GibbsMoments m;
  m.log_Z = shift + std::log1p(tail);
  m.mean = p.dot(levels);
  const Vector centered = levels.array() - m.mean;
  m.variance = p.dot(Vector(centered.array().square()));
  m.third_central = p.dot(Vector(centered.array().cube()));
  m.entropy = m.log_Z + beta * m.mean;
  return m;
}

}  // namespace

EnergySpectrum::EnergySpectrum(Vector levels) : levels_(std::move(levels)) {
  if (levels_.size() < 1) {
    throw ValidationError("energy spectrum needs at least one level");
  }
  if (!levels_.allFinite()) {
    throw ValidationError("energy spectrum levels must be finite");
  }
}

Vector gibbs_distribution(const EnergySpectrum& E, double beta) {
  if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
  const Vector t = -beta * E.levels();
  const double shift = t.maxCoeff();
  const Vector w = (t.array() - shift).exp();
  return w / w.sum();
}

ThermoState thermo_state(const EnergySpectrum& E, double beta) {
  if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
  const GibbsMoments m = moments_at(E.levels(), beta);
  ThermoState state;
  state.beta = beta;
  state.tau = 1.0 / beta;
  state.Z = std::exp(m.log_Z);
  state.log_Z = m.log_Z;
  state.mean_energy = m.mean;
  state.entropy = m.entropy;
  state.energy_variance = m.variance;
  return state;
}

double solve_beta(const EnergySpectrum& E, double target_energy) {
  if (!std::isfinite(target_energy)) {
    throw ValidationError("target energy must be finite");
  }
  const double lo_energy = E.min();
  const double hi_energy = E.max();
  if (!(hi_energy > lo_energy)) {
    throw DegenerateError("solve_beta: constant spectrum, mean energy is fixed at " +
                          std::to_string(lo_energy));
  }
  if (!(target_energy > lo_energy)) {
    throw InfeasibleError("solve_beta: target energy " + std::to_string(target_energy) +
                          " is at or below the attainable minimum " + std::to_string(lo_energy));
  }
  if (!(target_energy < hi_energy)) {
    throw InfeasibleError("solve_beta: target energy " + std::to_string(target_energy) +
                          " is at or above the attainable maximum " + std::to_string(hi_energy));
  }

  const double energy_tol = 1e-10 * (hi_energy - lo_energy);
  auto mean_at = [&E](double beta) { return moments_at(E.levels(), beta).mean; };

  const double residual_at_zero = mean_at(0.0) - target_energy;
  if (std::abs(residual_at_zero) <= energy_tol) return 0.0;

  // <E>(beta) decreases monotonically from max E to min E; expand a bracket
  // on the side the target lies on.
  double lo = 0.0;
  double hi = 0.0;
  if (residual_at_zero > 0.0) {  // target below the uniform mean: beta > 0
    hi = 1.0;
    while (mean_at(hi) > target_energy) {
      hi *= 2.0;
      if (hi > 1e18) break;
    }
    lo = 0.0;
  } else {  // target above the uniform mean: beta < 0
    lo = -1.0;
    while (mean_at(lo) < target_energy) {
      lo *= 2.0;
      if (lo < -1e18) break;
    }
    hi = 0.0;
  }

  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    mid = 0.5 * (lo + hi);
    const double residual = mean_at(mid) - target_energy;
    if (std::abs(residual) <= energy_tol) return mid;
    if (residual > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(mid))) break;
  }
  return mid;
}

IdentityReport verify_identities(const EnergySpectrum& E, double beta, double h) {
  if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ValidationError("central-difference step h must be positive and finite");
  }

  // Evaluate in the frame centered at the operating mean energy: entropy and
  // the central moments are shift-invariant, ln Z and <E> shift by exactly
  // known terms, and the centered quantities are differenced without the
  // catastrophic cancellation a large energy base would cause at cold beta.
  const double center = moments_at(E.levels(), beta).mean;
  const Vector centered_levels = E.levels().array() - center;
  const GibbsMoments at = moments_at(centered_levels, beta);
  const GibbsMoments fwd = moments_at(centered_levels, beta + h);
  const GibbsMoments bwd = moments_at(centered_levels, beta - h);

  const double d_log_Z = (fwd.log_Z - bwd.log_Z) / (2.0 * h);
  const double d_mean = (fwd.mean - bwd.mean) / (2.0 * h);
  const double d_entropy = (fwd.entropy - bwd.entropy) / (2.0 * h);
  const double d2_entropy = (fwd.entropy - 2.0 * at.entropy + bwd.entropy) / (h * h);
  const double delta_mean = fwd.mean - bwd.mean;
  const double delta_entropy = fwd.entropy - bwd.entropy;
  const double delta_tau = 1.0 / (beta + h) - 1.0 / (beta - h);

  IdentityReport report;
  report.h = h;
  report.tolerance = kIdentityTolerance;

  // relative error against max(|analytic|, |fd|, natural_scale); the natural
  // scale keeps the measure meaningful when an identity's terms nearly cancel
  // (e.g. -variance + beta * third moment crossing zero)
  auto add = [&report](const std::string& name, double analytic, double fd,
                       double natural_scale) {
    IdentityCheck check;
    check.name = name;
    check.analytic = analytic;
    check.finite_difference = fd;
    const double scale = std::max({std::abs(analytic), std::abs(fd), natural_scale});
    check.relative_error = scale > 1e-12 ? std::abs(analytic - fd) / scale
                                         : std::abs(analytic - fd);
    check.pass = check.relative_error <= kIdentityTolerance;
    report.checks.push_back(check);
  };
  auto skip = [&report](const std::string& name, const char* reason) {
    IdentityCheck check;
    check.name = name;
    check.skipped = true;
    check.skip_reason = reason;
    check.pass = true;
    report.checks.push_back(check);
  };
  // Derivatives with respect to <E> are undefined when the mean energy does
  // not vary (constant spectrum).
  const bool degenerate = at.variance <= 1e-14;

  const double energy_scale = E.levels().cwiseAbs().maxCoeff();

  // mean energy from the partition function (both sides mapped back to the
  // original frame; the centered ln Z picks up the exact +center term)
  add("mean_energy_from_log_Z", center + at.mean, center - d_log_Z, energy_scale);
  // energy fluctuations from the mean energy
  add("energy_variance_from_mean", at.variance, -d_mean, at.variance);
  // energy fluctuations from the entropy slope
  if (beta == 0.0) {
    skip("energy_variance_from_entropy", "undefined at beta=0");
  } else {
    add("energy_variance_from_entropy", at.variance, -(1.0 / beta) * d_entropy, at.variance);
  }
  // entropy slope against mean energy equals inverse temperature
  if (beta == 0.0) {
    skip("entropy_slope_vs_mean_energy", "undefined at beta=0");
  } else if (degenerate) {
    skip("entropy_slope_vs_mean_energy", "degenerate: mean energy does not vary");
  } else {
    add("entropy_slope_vs_mean_energy", beta, delta_entropy / delta_mean, std::abs(beta));
  }
  // curvature of entropy in mean energy
  if (beta == 0.0) {
    skip("entropy_curvature_vs_mean_energy", "undefined at beta=0");
  } else if (degenerate) {
    skip("entropy_curvature_vs_mean_energy", "degenerate: mean energy does not vary");
  } else {
    add("entropy_curvature_vs_mean_energy", -1.0 / at.variance,
        -(beta * beta) * (delta_tau / delta_mean), 1.0 / at.variance);
  }
  // entropy slope in beta
  if (beta == 0.0) {
    skip("entropy_slope_vs_beta", "undefined at beta=0");
  } else {
    add("entropy_slope_vs_beta", -beta * at.variance, d_entropy,
        std::abs(beta) * at.variance);
  }
  // entropy curvature in beta
  add("entropy_curvature_vs_beta", -at.variance + beta * at.third_central, d2_entropy,
      at.variance + std::abs(beta * at.third_central));

  report.all_pass = true;
  for (const IdentityCheck& check : report.checks) {
    if (!check.pass) report.all_pass = false;
  }
  return report;
}

Vector maxent_distribution_unconstrained(int N) {
  if (N < 1) throw ValidationError("maxent_distribution_unconstrained: N must be >= 1");
  return Vector::Constant(N, 1.0 / N);
}

}  // namespace egt
