#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "egt/errors.hpp"

namespace egt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Default tolerance for equilibrium certification. Ties are resolved toward
// "tie" so the ESS certificate stays conservative.
inline constexpr double kDefaultCertifyTol = 1e-9;

/// Payoff matrix of a finite symmetric two-player game. Entry (i, j) is the
/// payoff to the row strategy i against an opponent playing column strategy j.
class PayoffMatrix {
 public:
  explicit PayoffMatrix(Matrix entries);

  int size() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  // Content hash over the row-major entry bytes.
  std::uint64_t fingerprint() const;

 private:
  Matrix entries_;
};

/// Point on the strategy simplex: nonnegative weights summing to one.
/// Construction renormalizes sums within 1e-9 of one and rejects anything
/// further off; components below -1e-12 are rejected, smaller negative noise
/// is clamped to zero.
class MixedStrategy {
 public:
  explicit MixedStrategy(Vector weights);

  static MixedStrategy pure(int n, int index);
  static MixedStrategy uniform(int n);

  // Trusted path for integrator output, which may carry recorded simplex
  // drift that strict validation would reject.
  static MixedStrategy unchecked(Vector weights);

  int size() const { return static_cast<int>(weights_.size()); }
  const Vector& weights() const { return weights_; }
  double operator[](int i) const { return weights_(i); }

  std::vector<int> support(double eps = 1e-12) const;

 private:
  struct UncheckedTag {};
  MixedStrategy(Vector weights, UncheckedTag) : weights_(std::move(weights)) {}

  Vector weights_;
};

enum class Verdict { none, nash, strict_nash, ess };

const char* to_string(Verdict v);

struct Witness {
  enum class Kind {
    beats_equilibrium,  // pure reply with E(r,p) > E(p,p) + tol
    ties_equilibrium,   // pure reply with |E(r,p) - E(p,p)| <= tol
    fails_stability,    // tying reply with E(p,r) <= E(r,r) + tol
  };

  int strategy = 0;  // pure-strategy index, 0-based
  Kind kind = Kind::ties_equilibrium;
  double margin = 0.0;
};

struct EquilibriumReport {
  Verdict verdict = Verdict::none;
  // max over pure r of E(r,p) - E(p,p); nonnegative for any valid p.
  double worst_deviation = 0.0;
  std::vector<Witness> witnesses;
};

/// Bilinear payoff E(p,q) = sum_ij p_i a_ij q_j.
double expected_payoff(const MixedStrategy& p, const MixedStrategy& q, const PayoffMatrix& A);

/// Per-strategy fitness f_i = sum_j a_ij x_j.
Vector fitness(const MixedStrategy& x, const PayoffMatrix& A);

/// Population average fitness sum_kl a_kl x_k x_l; equals expected_payoff(x,x,A).
double average_fitness(const MixedStrategy& x, const PayoffMatrix& A);

/// Certifies p as a Nash equilibrium by checking every pure reply
/// (sufficient by bilinearity). Strictness requires a singleton support with
/// every other pure reply strictly worse.
EquilibriumReport certify_nash(const MixedStrategy& p, const PayoffMatrix& A,
                               double tol = kDefaultCertifyTol);

/// Certifies p as evolutionarily stable: Nash condition against every pure
/// reply, then for each pure reply tying within tol the stability condition
/// E(p,r) > E(r,r) + tol. Screening is restricted to pure mutants; the report
/// records tying witnesses so callers can escalate. Falls back to the
/// certified nash/strict-nash verdict when stability screening fails.
EquilibriumReport certify_ess(const MixedStrategy& p, const PayoffMatrix& A,
                              double tol = kDefaultCertifyTol);

}  // namespace egt
