#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "egt/game.hpp"
#include "egt/integrator.hpp"

namespace egt {

struct TrajectoryMeta {
  std::string integrator;
  double dt = 0.0;
  bool renormalized = true;
  std::uint64_t payoff_fingerprint = 0;
  // max |sum(x) - 1| observed before renormalization.
  double max_simplex_drift = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<MixedStrategy> states;
  TrajectoryMeta meta;

  std::size_t size() const { return times.size(); }
};

/// Replicator vector field: component i is (f_i(x) - <f(x)>) x_i. Components
/// sum to zero (simplex tangency).
Vector replicator_rhs(const MixedStrategy& x, const PayoffMatrix& A);

/// Fixed-step integration of the replicator dynamics. States are projected
/// back onto the simplex by dividing by their sum when cfg.renormalize is
/// set; pre-renormalization drift is recorded in the trajectory metadata.
/// Throws NumericalAbort with the offending time on non-finite states.
Trajectory integrate(const MixedStrategy& x0, const PayoffMatrix& A, const IntegratorConfig& cfg);

struct FixedPoint {
  MixedStrategy point;
  std::vector<int> support;
  double rhs_norm = 0.0;
  Verdict nash_verdict = Verdict::none;
  double worst_deviation = 0.0;
};

struct FixedPointScan {
  std::vector<FixedPoint> points;
  // Supports whose equal-fitness system was singular; skipped, not fatal.
  std::vector<std::vector<int>> singular_supports;
};

/// Enumerates every support subset (n <= 4; exponential and therefore
/// guarded), solves the equal-fitness linear system on each, and returns the
/// on-simplex solutions with ||rhs||_inf <= tol, labeled with their
/// certify_nash verdict.
FixedPointScan find_fixed_points(const PayoffMatrix& A, double tol = kDefaultCertifyTol);

/// Instantaneous rate of the Shannon entropy of x under the replicator flow:
/// sum_i U_i (h_i - x_i) with U_i = f_i - <f> and h_i = -x_i ln x_i. Refuses
/// states with components below 1e-15 (the formula is singular on the
/// boundary); callers that prefer clamping must do so explicitly.
double shannon_rate(const MixedStrategy& x, const PayoffMatrix& A);

namespace detail {

// Raw-vector versions used inside integrator loops, where states may carry
// recorded drift that MixedStrategy validation would reject.
Vector fitness_raw(const Vector& x, const Matrix& A);
Vector replicator_rhs_raw(const Vector& x, const Matrix& A);

}  // namespace detail
}  // namespace egt
