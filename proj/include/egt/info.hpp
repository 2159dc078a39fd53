#pragma once

#include "egt/game.hpp"

namespace egt {

// Zero-probability conventions used by every measure in this module:
// 0 ln 0 = 0; components below -1e-12 are rejected, smaller negative noise
// is clamped to zero; relative entropy returns the +infinity sentinel when
// absolute continuity fails (q_i = 0 where p_i > 0). Natural logarithm
// (nats) throughout.

/// Joint distribution P(s_i^A, s_j^B) over two finite strategy spaces.
class JointDistribution {
 public:
  explicit JointDistribution(Matrix probabilities);

  int rows() const { return static_cast<int>(probabilities_.rows()); }
  int cols() const { return static_cast<int>(probabilities_.cols()); }
  const Matrix& probabilities() const { return probabilities_; }

  Vector marginal_a() const { return probabilities_.rowwise().sum(); }
  Vector marginal_b() const { return probabilities_.colwise().sum(); }

 private:
  Matrix probabilities_;
};

/// H(x) = -sum_i x_i ln x_i, in [0, ln n].
double shannon_entropy(const Vector& x);

/// H(A,B) = -sum_ij P_ij ln P_ij.
double joint_entropy(const JointDistribution& P);

/// H(A|B) = H(A,B) - H(B), with H(B) over the column marginals.
double conditional_entropy(const JointDistribution& P);

/// I(A;B) = H(A) + H(B) - H(A,B); zero exactly for product distributions.
double mutual_information(const JointDistribution& P);

/// D(p||q) = sum_i p_i ln(p_i/q_i) >= 0.
double relative_entropy(const Vector& p, const Vector& q);

/// Leading-order probability exp(-N D(p||q)) of confusing q for p over N
/// repetitions. Infinite divergence yields 0; N = 0 yields 1.
double sanov_confusion_bound(const Vector& p, const Vector& q, long long repetitions);

}  // namespace egt
