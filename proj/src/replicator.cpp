#include "egt/replicator.hpp"

#include <cmath>
#include <string>

namespace egt {

namespace detail {

Vector fitness_raw(const Vector& x, const Matrix& A) { return A * x; }

Vector replicator_rhs_raw(const Vector& x, const Matrix& A) {
  const Vector f = A * x;
  const double avg = x.dot(f);
  return (f.array() - avg) * x.array();
}

}  // namespace detail

Vector replicator_rhs(const MixedStrategy& x, const PayoffMatrix& A) {
  if (x.size() != A.size()) {
    throw DimensionError("replicator_rhs: strategy size " + std::to_string(x.size()) +
                         " does not match payoff matrix size " + std::to_string(A.size()));
  }
  return detail::replicator_rhs_raw(x.weights(), A.entries());
}

Trajectory integrate(const MixedStrategy& x0, const PayoffMatrix& A, const IntegratorConfig& cfg) {
  if (x0.size() != A.size()) {
    throw DimensionError("integrate: initial state size " + std::to_string(x0.size()) +
                         " does not match payoff matrix size " + std::to_string(A.size()));
  }
  cfg.validate();

  const Matrix& payoff = A.entries();
  auto rhs = [&payoff](double, const Vector& y) { return detail::replicator_rhs_raw(y, payoff); };

  Trajectory traj;
  traj.meta.integrator = to_string(cfg.method);
  traj.meta.dt = cfg.dt;
  traj.meta.renormalized = cfg.renormalize;
  traj.meta.payoff_fingerprint = A.fingerprint();

  const long long steps = cfg.step_count();
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);

  Vector state = x0.weights();
  traj.times.push_back(0.0);
  traj.states.push_back(MixedStrategy::unchecked(state));

  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    state = detail::advance(cfg.method, state, t, cfg.dt, rhs);
    const double t_next = static_cast<double>(k + 1) * cfg.dt;
    if (!state.allFinite()) {
      throw NumericalAbort("integrate: non-finite state", t_next);
    }
    const double sum = state.sum();
    const double drift = std::abs(sum - 1.0);
    if (drift > traj.meta.max_simplex_drift) traj.meta.max_simplex_drift = drift;
    if (cfg.renormalize) state /= sum;
    traj.times.push_back(t_next);
    traj.states.push_back(MixedStrategy::unchecked(state));
  }
  return traj;
}

namespace {

// Solves for the equal-fitness point restricted to the given support.
// Returns false when the linear system is singular.
bool solve_support(const Matrix& A, const std::vector<int>& support, Vector* solution) {
  const int m = static_cast<int>(support.size());
  Matrix system = Matrix::Zero(m, m);
  Vector target = Vector::Zero(m);

  // f_{s0} - f_{si} = 0 for i = 1..m-1, plus normalization.
  for (int i = 1; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      system(i - 1, k) = A(support[0], support[k]) - A(support[i], support[k]);
    }
  }
  system.row(m - 1).setOnes();
  target(m - 1) = 1.0;

  Eigen::FullPivLU<Matrix> lu(system);
  if (!lu.isInvertible()) return false;
  *solution = lu.solve(target);
  return true;
}

}  // namespace

FixedPointScan find_fixed_points(const PayoffMatrix& A, double tol) {
  const int n = A.size();
  if (n > 4) {
    throw ValidationError("find_fixed_points: support enumeration is guarded to n <= 4, got n=" +
                          std::to_string(n));
  }
  if (tol < 0.0) throw ValidationError("find_fixed_points: tolerance must be >= 0");

  FixedPointScan scan;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) support.push_back(i);
    }

    Vector sub;
    if (!solve_support(A.entries(), support, &sub)) {
      scan.singular_supports.push_back(support);
      continue;
    }

    // Only solutions strictly inside the support face; smaller supports
    // produce the boundary cases themselves.
    bool interior = true;
    for (int k = 0; k < static_cast<int>(support.size()); ++k) {
      if (!(sub(k) > 1e-12)) {
        interior = false;
        break;
      }
    }
    if (!interior) continue;

    Vector full = Vector::Zero(n);
    for (int k = 0; k < static_cast<int>(support.size()); ++k) full(support[k]) = sub(k);

    const double rhs_norm = detail::replicator_rhs_raw(full, A.entries()).cwiseAbs().maxCoeff();
    if (rhs_norm > tol) continue;

    bool duplicate = false;
    for (const FixedPoint& existing : scan.points) {
      if ((existing.point.weights() - full).cwiseAbs().maxCoeff() < 1e-9) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;

    MixedStrategy point(full);
    const EquilibriumReport nash = certify_nash(point, A);
    scan.points.push_back({std::move(point), support, rhs_norm, nash.verdict, nash.worst_deviation});
  }
  return scan;
}

double shannon_rate(const MixedStrategy& x, const PayoffMatrix& A) {
  if (x.size() != A.size()) {
    throw DimensionError("shannon_rate: strategy size " + std::to_string(x.size()) +
                         " does not match payoff matrix size " + std::to_string(A.size()));
  }
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < 1e-15) {
      throw BoundaryError("shannon_rate: component " + std::to_string(i) +
                          " is on the simplex boundary; the entropy rate is undefined there");
    }
  }
  const Vector f = detail::fitness_raw(x.weights(), A.entries());
  const double avg = x.weights().dot(f);
  double rate = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double u = f(i) - avg;
    const double h = -x[i] * std::log(x[i]);
    rate += u * (h - x[i]);
  }
  return rate;
}

}  // namespace egt
