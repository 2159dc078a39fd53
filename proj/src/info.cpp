#include "egt/info.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace egt {
namespace {

// Clamps small negative noise to zero; rejects anything below -1e-12.
void sanitize_probabilities(Eigen::Ref<Vector> v, const char* what) {
  if (!v.allFinite()) {
    throw ValidationError(std::string(what) + " must be finite");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) < -1e-12) {
      throw ValidationError(std::string(what) + " component " + std::to_string(i) +
                            " is negative (" + std::to_string(v(i)) + ")");
    }
    if (v(i) < 0.0) v(i) = 0.0;
  }
}

double entropy_of(const Vector& v) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) > 0.0) h -= v(i) * std::log(v(i));
  }
  return h < 0.0 ? 0.0 : h;
}

}  // namespace

JointDistribution::JointDistribution(Matrix probabilities)
    : probabilities_(std::move(probabilities)) {
  if (probabilities_.rows() < 1 || probabilities_.cols() < 1) {
    throw ValidationError("joint distribution must be at least 1x1");
  }
  if (!probabilities_.allFinite()) {
    throw ValidationError("joint distribution entries must be finite");
  }
  for (Eigen::Index i = 0; i < probabilities_.rows(); ++i) {
    for (Eigen::Index j = 0; j < probabilities_.cols(); ++j) {
      if (probabilities_(i, j) < -1e-12) {
        throw ValidationError("joint distribution entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") is negative");
      }
      if (probabilities_(i, j) < 0.0) probabilities_(i, j) = 0.0;
    }
  }
  const double total = probabilities_.sum();
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("joint distribution sums to " + std::to_string(total) +
                          ", expected 1 within 1e-9");
  }
  probabilities_ /= total;
}

double shannon_entropy(const Vector& x) {
  Vector v = x;
  sanitize_probabilities(v, "probability vector");
  return entropy_of(v);
}

double joint_entropy(const JointDistribution& P) {
  double h = 0.0;
  const Matrix& p = P.probabilities();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) > 0.0) h -= p(i, j) * std::log(p(i, j));
    }
  }
  return h < 0.0 ? 0.0 : h;
}

double conditional_entropy(const JointDistribution& P) {
  const double value = joint_entropy(P) - entropy_of(P.marginal_b());
  return value < 0.0 ? 0.0 : value;  // rounding noise; the chain rule gives >= 0
}

double mutual_information(const JointDistribution& P) {
  return entropy_of(P.marginal_a()) + entropy_of(P.marginal_b()) - joint_entropy(P);
}

double relative_entropy(const Vector& p, const Vector& q) {
  if (p.size() != q.size()) {
    throw DimensionError("relative_entropy: vectors have sizes " + std::to_string(p.size()) +
                         " and " + std::to_string(q.size()));
  }
  Vector pv = p;
  Vector qv = q;
  sanitize_probabilities(pv, "first distribution");
  sanitize_probabilities(qv, "second distribution");
  for (auto [v, name] : {std::pair<Vector*, const char*>{&pv, "first distribution"},
                         std::pair<Vector*, const char*>{&qv, "second distribution"}}) {
    const double sum = v->sum();
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ValidationError(std::string(name) + " sums to " + std::to_string(sum) +
                            ", expected 1 within 1e-9");
    }
    *v /= sum;
  }
  double d = 0.0;
  for (Eigen::Index i = 0; i < pv.size(); ++i) {
    if (pv(i) <= 0.0) continue;
    if (qv(i) <= 0.0) return std::numeric_limits<double>::infinity();
    d += pv(i) * std::log(pv(i) / qv(i));
  }
  return d < 0.0 ? 0.0 : d;
}

double sanov_confusion_bound(const Vector& p, const Vector& q, long long repetitions) {
  if (repetitions < 0) {
    throw ValidationError("sanov_confusion_bound: repetitions must be >= 0");
  }
  if (repetitions == 0) return 1.0;
  const double d = relative_entropy(p, q);
  if (std::isinf(d)) return 0.0;
  return std::exp(-static_cast<double>(repetitions) * d);
}

}  // namespace egt
