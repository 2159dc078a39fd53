#include "egt/game.hpp"

#include <cmath>
#include <string>

#include "egt/fingerprint.hpp"

namespace egt {
namespace {

void check_dimensions(int lhs, int rhs, const char* what) {
  if (lhs != rhs) {
    throw DimensionError(std::string(what) + ": size " + std::to_string(lhs) +
                         " does not match size " + std::to_string(rhs));
  }
}

// True when p is (numerically) the pure strategy r itself, which must not be
// counted as its own mutant.
bool is_pure_at(const MixedStrategy& p, int r) { return p[r] > 1.0 - 1e-12; }

}  // namespace

PayoffMatrix::PayoffMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw ValidationError("payoff matrix must be square with n >= 1, got " +
                          std::to_string(entries_.rows()) + "x" +
                          std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite()) {
    throw ValidationError("payoff matrix entries must be finite");
  }
}

std::uint64_t PayoffMatrix::fingerprint() const {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major = entries_;
  return fnv1a64(row_major.data(), sizeof(double) * static_cast<std::size_t>(row_major.size()));
}

MixedStrategy::MixedStrategy(Vector weights) : weights_(std::move(weights)) {
  if (weights_.size() < 1) {
    throw ValidationError("strategy vector must have at least one component");
  }
  if (!weights_.allFinite()) {
    throw ValidationError("strategy weights must be finite");
  }
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (weights_(i) < -1e-12) {
      throw ValidationError("strategy weight " + std::to_string(i) + " is negative (" +
                            std::to_string(weights_(i)) + ")");
    }
    if (weights_(i) < 0.0) weights_(i) = 0.0;
  }
  const double sum = weights_.sum();
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("strategy weights sum to " + std::to_string(sum) +
                          ", expected 1 within 1e-9");
  }
  weights_ /= sum;
}

MixedStrategy MixedStrategy::pure(int n, int index) {
  if (n < 1 || index < 0 || index >= n) {
    throw ValidationError("pure strategy index " + std::to_string(index) +
                          " out of range for n=" + std::to_string(n));
  }
  Vector w = Vector::Zero(n);
  w(index) = 1.0;
  return MixedStrategy(std::move(w), UncheckedTag{});
}

MixedStrategy MixedStrategy::uniform(int n) {
  if (n < 1) throw ValidationError("uniform strategy needs n >= 1");
  return MixedStrategy(Vector::Constant(n, 1.0 / n), UncheckedTag{});
}

MixedStrategy MixedStrategy::unchecked(Vector weights) {
  return MixedStrategy(std::move(weights), UncheckedTag{});
}

std::vector<int> MixedStrategy::support(double eps) const {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (weights_(i) > eps) out.push_back(static_cast<int>(i));
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::none: return "none";
    case Verdict::nash: return "nash";
    case Verdict::strict_nash: return "strict-nash";
    case Verdict::ess: return "ess";
  }
  return "none";
}

double expected_payoff(const MixedStrategy& p, const MixedStrategy& q, const PayoffMatrix& A) {
  check_dimensions(p.size(), A.size(), "expected_payoff: row strategy vs payoff matrix");
  check_dimensions(q.size(), A.size(), "expected_payoff: column strategy vs payoff matrix");
  return p.weights().dot(A.entries() * q.weights());
}

Vector fitness(const MixedStrategy& x, const PayoffMatrix& A) {
  check_dimensions(x.size(), A.size(), "fitness: strategy vs payoff matrix");
  return A.entries() * x.weights();
}

double average_fitness(const MixedStrategy& x, const PayoffMatrix& A) {
  return expected_payoff(x, x, A);
}

namespace {

struct DeviationScan {
  Vector pure_payoffs;     // E(e_r, p) for every pure r
  double equilibrium_payoff = 0.0;
  double worst_deviation = 0.0;
};

DeviationScan scan_deviations(const MixedStrategy& p, const PayoffMatrix& A) {
  DeviationScan scan;
  scan.pure_payoffs = A.entries() * p.weights();
  scan.equilibrium_payoff = p.weights().dot(scan.pure_payoffs);
  scan.worst_deviation = (scan.pure_payoffs.array() - scan.equilibrium_payoff).maxCoeff();
  return scan;
}

}  // namespace

EquilibriumReport certify_nash(const MixedStrategy& p, const PayoffMatrix& A, double tol) {
  check_dimensions(p.size(), A.size(), "certify_nash: strategy vs payoff matrix");
  if (tol < 0.0) throw ValidationError("certification tolerance must be >= 0");

  const DeviationScan scan = scan_deviations(p, A);
  EquilibriumReport report;
  report.worst_deviation = scan.worst_deviation;

  bool all_off_support_strict = true;
  const std::vector<int> support = p.support();
  for (int r = 0; r < p.size(); ++r) {
    const double d = scan.pure_payoffs(r) - scan.equilibrium_payoff;
    if (d > tol) {
      report.witnesses.push_back({r, Witness::Kind::beats_equilibrium, d});
    } else if (d >= -tol && !is_pure_at(p, r)) {
      report.witnesses.push_back({r, Witness::Kind::ties_equilibrium, d});
    }
    if (!is_pure_at(p, r) && !(d < -tol)) all_off_support_strict = false;
  }

  if (scan.worst_deviation > tol) {
    report.verdict = Verdict::none;
  } else if (support.size() == 1 && all_off_support_strict) {
    report.verdict = Verdict::strict_nash;
  } else {
    report.verdict = Verdict::nash;
  }
  return report;
}

EquilibriumReport certify_ess(const MixedStrategy& p, const PayoffMatrix& A, double tol) {
  EquilibriumReport report = certify_nash(p, A, tol);
  if (report.verdict == Verdict::none) return report;

  const DeviationScan scan = scan_deviations(p, A);
  bool stable = true;
  for (int r = 0; r < p.size(); ++r) {
    if (is_pure_at(p, r)) continue;
    const double d = scan.pure_payoffs(r) - scan.equilibrium_payoff;
    if (std::abs(d) > tol) continue;  // not an alternative best reply
    // Stability against the tying mutant: E(p,r) > E(r,r).
    const double vs_mutant = p.weights().dot(A.entries().col(r));
    const double mutant_self = A(r, r);
    const double margin = vs_mutant - mutant_self;
    if (!(margin > tol)) {
      stable = false;
      report.witnesses.push_back({r, Witness::Kind::fails_stability, margin});
    }
  }
  if (stable) report.verdict = Verdict::ess;
  return report;
}

}  // namespace egt
