#include "egt/lax.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace egt {
namespace {

void check_match(int x_size, int a_size, const char* op) {
  if (x_size != a_size) {
    throw DimensionError(std::string(op) + ": strategy size " + std::to_string(x_size) +
                         " does not match payoff matrix size " + std::to_string(a_size));
  }
}

}  // namespace

namespace detail {

Matrix freq_from_raw(const Vector& x) {
  const Eigen::Index n = x.size();
  Vector clamped = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (clamped(i) < 0.0 && clamped(i) > -1e-15) clamped(i) = 0.0;
  }
  Matrix X(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double entry = std::sqrt(clamped(i) * clamped(j));
      X(i, j) = entry;
      X(j, i) = entry;
    }
  }
  return X;
}

Matrix lambda_from_raw(const Vector& x, const Matrix& A) {
  const Vector f = A * x;
  const Matrix X = freq_from_raw(x);
  const Eigen::Index n = x.size();
  Matrix L(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      L(i, j) = 0.5 * (f(i) * X(i, j) - X(j, i) * f(j));
    }
  }
  return L;
}

}  // namespace detail

FreqMatrix::FreqMatrix(Matrix entries) : entries_(std::move(entries)) {
  const Eigen::Index n = entries_.rows();
  if (n < 1 || entries_.cols() != n) {
    throw ValidationError("frequency matrix must be square with n >= 1");
  }
  if (!entries_.allFinite()) {
    throw ValidationError("frequency matrix entries must be finite");
  }
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("frequency matrix must be symmetric within 1e-12");
  }
  if (std::abs(entries_.trace() - 1.0) > 1e-12) {
    throw ValidationError("frequency matrix must have trace 1 within 1e-12");
  }
  const Matrix residual = entries_ * entries_ - entries_;
  if (residual.cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("frequency matrix must be idempotent within 1e-10");
  }
  if (std::abs((entries_ * entries_).trace() - 1.0) > 1e-10) {
    throw ValidationError("frequency matrix must have Tr X^2 = 1 within 1e-10");
  }
}

FreqMatrix freq_matrix(const MixedStrategy& x) {
  return FreqMatrix(detail::freq_from_raw(x.weights()));
}

Matrix g_sym(const MixedStrategy& x, const PayoffMatrix& A) {
  check_match(x.size(), A.size(), "g_sym");
  const Vector f = detail::fitness_raw(x.weights(), A.entries());
  const double avg = x.weights().dot(f);
  const Matrix X = detail::freq_from_raw(x.weights());
  const int n = x.size();
  Matrix G(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      G(i, j) = 0.5 * f(i) * X(i, j) + 0.5 * f(j) * X(j, i) - avg * X(i, j);
    }
  }
  return G;
}

Matrix q_matrix(const MixedStrategy& x, const PayoffMatrix& A) {
  check_match(x.size(), A.size(), "q_matrix");
  const Vector f = detail::fitness_raw(x.weights(), A.entries());
  return (0.5 * f).asDiagonal();
}

Matrix lambda_matrix(const MixedStrategy& x, const PayoffMatrix& A) {
  check_match(x.size(), A.size(), "lambda_matrix");
  return detail::lambda_from_raw(x.weights(), A.entries());
}

Matrix lax_rhs(const MixedStrategy& x, const PayoffMatrix& A) {
  check_match(x.size(), A.size(), "lax_rhs");
  const Matrix L = detail::lambda_from_raw(x.weights(), A.entries());
  const Matrix X = detail::freq_from_raw(x.weights());
  return L * X - X * L;
}

double MatrixTrajectory::max_trace_drift() const {
  return trace_drift.empty() ? 0.0 : *std::max_element(trace_drift.begin(), trace_drift.end());
}

double MatrixTrajectory::max_idempotency_drift() const {
  return idempotency_drift.empty()
             ? 0.0
             : *std::max_element(idempotency_drift.begin(), idempotency_drift.end());
}

double MatrixTrajectory::max_hermiticity_drift() const {
  return hermiticity_drift.empty()
             ? 0.0
             : *std::max_element(hermiticity_drift.begin(), hermiticity_drift.end());
}

MatrixTrajectory integrate_matrix(const MixedStrategy& x0, const PayoffMatrix& A,
                                  const IntegratorConfig& cfg) {
  check_match(x0.size(), A.size(), "integrate_matrix");
  cfg.validate();

  const Matrix& payoff = A.entries();
  // Lambda is built from the live matrix entries and the fitnesses of the
  // live diagonal, so invariant drift is a genuine measurement of the
  // commutator flow rather than of a vector reconstruction.
  auto rhs = [&payoff](double, const Matrix& X) {
    const Vector f = payoff * X.diagonal();
    const Eigen::Index n = X.rows();
    Matrix L(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        L(i, j) = 0.5 * (f(i) * X(i, j) - X(j, i) * f(j));
      }
    }
    return Matrix(L * X - X * L);
  };

  MatrixTrajectory traj;
  traj.meta.integrator = to_string(cfg.method);
  traj.meta.dt = cfg.dt;
  traj.meta.renormalized = cfg.renormalize;
  traj.meta.payoff_fingerprint = A.fingerprint();

  const long long steps = cfg.step_count();
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);

  auto record = [&traj](double t, const Matrix& X) {
    traj.times.push_back(t);
    traj.trace_drift.push_back(std::abs(X.trace() - 1.0));
    traj.idempotency_drift.push_back((X * X - X).cwiseAbs().maxCoeff());
    traj.hermiticity_drift.push_back((X - X.transpose()).cwiseAbs().maxCoeff());
    traj.states.push_back(X);
  };

  Matrix state = detail::freq_from_raw(x0.weights());
  record(0.0, state);

  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    state = detail::advance(cfg.method, state, t, cfg.dt, rhs);
    const double t_next = static_cast<double>(k + 1) * cfg.dt;
    if (!state.allFinite()) {
      throw NumericalAbort("integrate_matrix: non-finite state", t_next);
    }
    record(t_next, state);
    if (cfg.renormalize) {
      state /= state.trace();
      traj.states.back() = state;
    }
  }

  const double drift = traj.max_trace_drift();
  if (drift > traj.meta.max_simplex_drift) traj.meta.max_simplex_drift = drift;
  return traj;
}

}  // namespace egt
