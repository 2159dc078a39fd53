#include "egt/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace egt {
namespace {

void check_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw ValidationError(std::string(what) + " must be square with n >= 1");
  }
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + " entries must be finite");
  }
}

double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix rho) : rho_(std::move(rho)) {
  check_square(rho_, "density operator");
  if (hermiticity_defect(rho_) > 1e-12) {
    throw ValidationError("density operator must be Hermitian within 1e-12");
  }
  if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > 1e-12) {
    throw ValidationError("density operator must have unit trace within 1e-12");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) {
    throw ValidationError("density operator must be positive semidefinite (min eigenvalue " +
                          std::to_string(solver.eigenvalues().minCoeff()) + ")");
  }
  if ((rho_ * rho_).trace().real() > 1.0 + 1e-10) {
    throw ValidationError("density operator must satisfy Tr rho^2 <= 1");
  }
}

DensityOperator DensityOperator::unchecked(ComplexMatrix rho) {
  return DensityOperator(std::move(rho), UncheckedTag{});
}

Hamiltonian::Hamiltonian(ComplexMatrix entries, double hbar)
    : entries_(std::move(entries)), hbar_(hbar) {
  check_square(entries_, "Hamiltonian");
  if (hermiticity_defect(entries_) > 1e-12) {
    throw ValidationError("Hamiltonian must be Hermitian within 1e-12");
  }
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) {
    throw ValidationError("hbar must be positive and finite");
  }
}

DensityOperator density_from_ensemble(const std::vector<ComplexVector>& states,
                                      const Vector& probs) {
  if (states.empty()) throw ValidationError("ensemble needs at least one state");
  if (static_cast<Eigen::Index>(states.size()) != probs.size()) {
    throw DimensionError("ensemble has " + std::to_string(states.size()) + " states but " +
                         std::to_string(probs.size()) + " probabilities");
  }
  const MixedStrategy weights{Vector(probs)};  // simplex validation
  const Eigen::Index n = states.front().size();
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].size() != n) {
      throw DimensionError("ensemble state " + std::to_string(k) + " has dimension " +
                           std::to_string(states[k].size()) + ", expected " + std::to_string(n));
    }
    if (std::abs(states[k].norm() - 1.0) > 1e-12) {
      throw ValidationError("ensemble state " + std::to_string(k) + " is not unit-norm (norm " +
                            std::to_string(states[k].norm()) + ")");
    }
    rho += weights[static_cast<int>(k)] * (states[k] * states[k].adjoint());
  }
  return DensityOperator(std::move(rho));
}

DensityOperator quantize(const MixedStrategy& x) {
  return DensityOperator(detail::freq_from_raw(x.weights()).cast<Complex>());
}

Hamiltonian hamiltonian_from_lambda(const Matrix& lambda, double hbar) {
  if (lambda.rows() != lambda.cols()) {
    throw ValidationError("lambda matrix must be square");
  }
  if ((lambda + lambda.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("lambda matrix must be antisymmetric within 1e-12");
  }
  return Hamiltonian(Complex(0.0, hbar) * lambda.cast<Complex>(), hbar);
}

ComplexMatrix von_neumann_rhs(const DensityOperator& rho, const Hamiltonian& H) {
  if (rho.size() != H.size()) {
    throw DimensionError("von_neumann_rhs: density operator size " + std::to_string(rho.size()) +
                         " does not match Hamiltonian size " + std::to_string(H.size()));
  }
  const Complex scale(0.0, -1.0 / H.hbar());
  return scale * (H.matrix() * rho.matrix() - rho.matrix() * H.matrix());
}

double Evolution::max_trace_drift() const {
  return trace_drift.empty() ? 0.0 : *std::max_element(trace_drift.begin(), trace_drift.end());
}

double Evolution::max_hermiticity_drift() const {
  return hermiticity_drift.empty()
             ? 0.0
             : *std::max_element(hermiticity_drift.begin(), hermiticity_drift.end());
}

double Evolution::lowest_eigenvalue() const {
  return min_eigenvalue.empty()
             ? 0.0
             : *std::min_element(min_eigenvalue.begin(), min_eigenvalue.end());
}

double Evolution::max_purity_excess() const {
  double excess = 0.0;
  for (double p : purity) excess = std::max(excess, p - 1.0);
  return excess;
}

namespace {

template <class Rhs>
Evolution run_evolution(const DensityOperator& rho0, double hbar, const IntegratorConfig& cfg,
                        Rhs&& rhs) {
  cfg.validate();

  Evolution evo;
  evo.integrator = to_string(cfg.method);
  evo.dt = cfg.dt;
  evo.hbar = hbar;

  const long long steps = cfg.step_count();
  evo.times.reserve(static_cast<std::size_t>(steps) + 1);
  evo.states.reserve(static_cast<std::size_t>(steps) + 1);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;
  auto record = [&](double t, const ComplexMatrix& rho) {
    evo.times.push_back(t);
    evo.trace_drift.push_back(std::abs(rho.trace() - Complex(1.0, 0.0)));
    evo.hermiticity_drift.push_back(hermiticity_defect(rho));
    solver.compute(rho, Eigen::EigenvaluesOnly);
    evo.min_eigenvalue.push_back(solver.eigenvalues().minCoeff());
    evo.purity.push_back((rho * rho).trace().real());
    evo.states.push_back(DensityOperator::unchecked(rho));
  };

  ComplexMatrix state = rho0.matrix();
  record(0.0, state);

  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    state = detail::advance(cfg.method, state, t, cfg.dt, rhs);
    const double t_next = static_cast<double>(k + 1) * cfg.dt;
    if (!state.allFinite()) {
      throw NumericalAbort("evolve: non-finite density operator", t_next);
    }
    record(t_next, state);
  }
  return evo;
}

}  // namespace

Evolution evolve(const DensityOperator& rho0,
                 const std::function<ComplexMatrix(double)>& hamiltonian_of_t, double hbar,
                 const IntegratorConfig& cfg) {
  if (!hamiltonian_of_t) throw ValidationError("evolve: Hamiltonian source is empty");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw ValidationError("evolve: hbar must be positive and finite");
  }
  const Complex scale(0.0, -1.0 / hbar);
  auto rhs = [&hamiltonian_of_t, scale](double t, const ComplexMatrix& rho) {
    const ComplexMatrix h = hamiltonian_of_t(t);
    return ComplexMatrix(scale * (h * rho - rho * h));
  };
  return run_evolution(rho0, hbar, cfg, rhs);
}

Evolution evolve(const DensityOperator& rho0, const Hamiltonian& H, const IntegratorConfig& cfg) {
  if (rho0.size() != H.size()) {
    throw DimensionError("evolve: density operator size " + std::to_string(rho0.size()) +
                         " does not match Hamiltonian size " + std::to_string(H.size()));
  }
  const ComplexMatrix h = H.matrix();
  const Complex scale(0.0, -1.0 / H.hbar());
  auto rhs = [h, scale](double, const ComplexMatrix& rho) {
    return ComplexMatrix(scale * (h * rho - rho * h));
  };
  return run_evolution(rho0, H.hbar(), cfg, rhs);
}

Evolution evolve_self_consistent(const DensityOperator& rho0, const PayoffMatrix& A, double hbar,
                                 const IntegratorConfig& cfg) {
  if (rho0.size() != A.size()) {
    throw DimensionError("evolve_self_consistent: density operator size " +
                         std::to_string(rho0.size()) + " does not match payoff matrix size " +
                         std::to_string(A.size()));
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw ValidationError("evolve_self_consistent: hbar must be positive and finite");
  }
  const Matrix& payoff = A.entries();
  // With H = i hbar Lambda the von Neumann right-hand side reduces to
  // [Lambda, rho] exactly; hbar cancels and never enters the arithmetic.
  auto rhs = [&payoff](double, const ComplexMatrix& rho) {
    Vector x = rho.diagonal().real();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x(i) < 0.0) x(i) = 0.0;
    }
    const ComplexMatrix L = detail::lambda_from_raw(x, payoff).cast<Complex>();
    return ComplexMatrix(L * rho - rho * L);
  };
  return run_evolution(rho0, hbar, cfg, rhs);
}

double von_neumann_entropy(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    double lambda = solver.eigenvalues()(k);
    if (lambda < -1e-10) {
      throw ValidationError("von_neumann_entropy: eigenvalue " + std::to_string(lambda) +
                            " below -1e-10; not a valid state");
    }
    if (lambda <= 0.0) continue;  // 0 ln 0 = 0, and [-1e-10, 0) clamps to 0
    entropy -= lambda * std::log(lambda);
  }
  return entropy < 0.0 ? 0.0 : entropy;
}

double vn_entropy_rate_series(const DensityOperator& rho, const ComplexMatrix& drho) {
  if (drho.rows() != rho.size() || drho.cols() != rho.size()) {
    throw DimensionError("vn_entropy_rate_series: drho is " + std::to_string(drho.rows()) + "x" +
                         std::to_string(drho.cols()) + ", expected " + std::to_string(rho.size()) +
                         "x" + std::to_string(rho.size()));
  }
  const ComplexMatrix& r = rho.matrix();
  const ComplexMatrix r2 = r * r;
  const ComplexMatrix r3 = r2 * r;
  const Complex value = (11.0 / 6.0) * drho.trace() - 6.0 * (r * drho).trace() +
                        (9.0 / 2.0) * (r2 * drho).trace() - (4.0 / 3.0) * (r3 * drho).trace();
  return value.real();
}

double vn_entropy_rate_exact(const DensityOperator& rho, const ComplexMatrix& drho) {
  if (drho.rows() != rho.size() || drho.cols() != rho.size()) {
    throw DimensionError("vn_entropy_rate_exact: drho dimensions do not match the state");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix());
  double rate = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lambda = std::max(solver.eigenvalues()(k), 1e-15);
    const ComplexVector v = solver.eigenvectors().col(k);
    const double dlambda = (v.adjoint() * drho * v)(0).real();
    rate -= dlambda * (std::log(lambda) + 1.0);
  }
  return rate;
}

}  // namespace egt
