#pragma once

#include <vector>

#include "egt/game.hpp"
#include "egt/integrator.hpp"
#include "egt/replicator.hpp"

namespace egt {

/// Relative-frequency matrix X with x_ij = sqrt(x_i x_j): real symmetric,
/// trace one, and a rank-1 projector onto sqrt(x) (X^2 = X, Tr X^2 = 1).
class FreqMatrix {
 public:
  explicit FreqMatrix(Matrix entries);

  int size() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  Vector diagonal() const { return entries_.diagonal(); }

 private:
  Matrix entries_;
};

FreqMatrix freq_matrix(const MixedStrategy& x);

/// Symmetrized generator (G + G^T)_ij = 1/2 f_i x_ij + 1/2 f_j x_ji - <f> x_ij.
/// Its diagonal equals replicator_rhs.
Matrix g_sym(const MixedStrategy& x, const PayoffMatrix& A);

/// Diagonal matrix with q_ii = f_i / 2.
Matrix q_matrix(const MixedStrategy& x, const PayoffMatrix& A);

/// Antisymmetric generator L_ij = 1/2 [f_i x_ij - x_ji f_j]; equals the
/// commutator [Q, X].
Matrix lambda_matrix(const MixedStrategy& x, const PayoffMatrix& A);

/// Commutator form of the replicator field: [Lambda, X]. Coincides with
/// g_sym, entry (i,j) being x_ij ((f_i + f_j)/2 - <f>).
Matrix lax_rhs(const MixedStrategy& x, const PayoffMatrix& A);

struct MatrixTrajectory {
  std::vector<double> times;
  std::vector<Matrix> states;
  // Per-step invariant drift, recorded before any renormalization.
  std::vector<double> trace_drift;        // |Tr X - 1|
  std::vector<double> idempotency_drift;  // max |(X^2 - X)_ij|
  std::vector<double> hermiticity_drift;  // max |(X - X^T)_ij|
  TrajectoryMeta meta;

  std::size_t size() const { return times.size(); }
  double max_trace_drift() const;
  double max_idempotency_drift() const;
  double max_hermiticity_drift() const;
};

/// Integrates dX/dt = [Lambda(X), X] directly in matrix space, with Lambda
/// built from the current matrix entries and the fitnesses of its diagonal.
/// X is never projected back onto the rank-1 manifold; invariant drift is
/// recorded per step. cfg.renormalize only rescales X by its trace after the
/// drift is recorded.
MatrixTrajectory integrate_matrix(const MixedStrategy& x0, const PayoffMatrix& A,
                                  const IntegratorConfig& cfg);

namespace detail {

// sqrt(x_i x_j) with negative rounding noise below 1e-15 clamped before the
// square root (principal branch).
Matrix freq_from_raw(const Vector& x);
Matrix lambda_from_raw(const Vector& x, const Matrix& A);

}  // namespace detail
}  // namespace egt
