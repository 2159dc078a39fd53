#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

#include "egt/game.hpp"
#include "egt/integrator.hpp"
#include "egt/lax.hpp"

namespace egt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Hermitian, positive semidefinite, unit-trace matrix describing a
/// statistical mixture of quantum states.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix rho);

  // Trusted path for integrator output whose invariant drift is recorded
  // separately instead of re-validated.
  static DensityOperator unchecked(ComplexMatrix rho);

  int size() const { return static_cast<int>(rho_.rows()); }
  const ComplexMatrix& matrix() const { return rho_; }

  double trace_real() const { return rho_.trace().real(); }
  double purity() const { return (rho_ * rho_).trace().real(); }

 private:
  struct UncheckedTag {};
  DensityOperator(ComplexMatrix rho, UncheckedTag) : rho_(std::move(rho)) {}

  ComplexMatrix rho_;
};

/// Hermitian generator of the von Neumann evolution together with its scale
/// constant hbar (natural units by default).
class Hamiltonian {
 public:
  explicit Hamiltonian(ComplexMatrix entries, double hbar = 1.0);

  int size() const { return static_cast<int>(entries_.rows()); }
  const ComplexMatrix& matrix() const { return entries_; }
  double hbar() const { return hbar_; }

 private:
  ComplexMatrix entries_;
  double hbar_;
};

/// rho = sum_k p_k |psi_k><psi_k| for unit-norm states and probabilities on
/// the simplex.
DensityOperator density_from_ensemble(const std::vector<ComplexVector>& states,
                                      const Vector& probs);

/// Image of the frequency matrix under the quantization map:
/// rho_ij = sqrt(x_i x_j). Always a rank-1 projector (pure state).
DensityOperator quantize(const MixedStrategy& x);

/// H = i hbar Lambda; Hermitian because Lambda is real antisymmetric.
Hamiltonian hamiltonian_from_lambda(const Matrix& lambda, double hbar = 1.0);

/// (-i/hbar) [H, rho]; Hermitian and traceless.
ComplexMatrix von_neumann_rhs(const DensityOperator& rho, const Hamiltonian& H);

struct Evolution {
  std::vector<double> times;
  std::vector<DensityOperator> states;
  // Per-step invariant drift.
  std::vector<double> trace_drift;        // |Tr rho - 1|
  std::vector<double> hermiticity_drift;  // max |(rho - rho^dagger)_ij|
  std::vector<double> min_eigenvalue;     // smallest eigenvalue of rho
  std::vector<double> purity;             // Re Tr rho^2
  std::string integrator;
  double dt = 0.0;
  double hbar = 1.0;

  std::size_t size() const { return times.size(); }
  double max_trace_drift() const;
  double max_hermiticity_drift() const;
  double lowest_eigenvalue() const;
  double max_purity_excess() const;  // max over steps of Tr rho^2 - 1
};

/// Fixed-step integration of i hbar drho/dt = [H(t), rho] for an external,
/// possibly time-dependent Hamiltonian source.
Evolution evolve(const DensityOperator& rho0,
                 const std::function<ComplexMatrix(double)>& hamiltonian_of_t, double hbar,
                 const IntegratorConfig& cfg);

Evolution evolve(const DensityOperator& rho0, const Hamiltonian& H, const IntegratorConfig& cfg);

/// Self-consistent mode: at every integrator stage the generator is rebuilt
/// as H = i hbar Lambda(diag rho, A), closing the quantization loop. Negative
/// rounding noise on the diagonal is clamped to zero before Lambda is built.
Evolution evolve_self_consistent(const DensityOperator& rho0, const PayoffMatrix& A, double hbar,
                                 const IntegratorConfig& cfg);

/// S = -Tr rho ln rho via the Hermitian eigendecomposition, with 0 ln 0 = 0.
/// Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower is an
/// invalid state.
double von_neumann_entropy(const DensityOperator& rho);

/// Four-term truncated entropy rate, exactly as the series expansion of
/// ln rho around the identity yields it:
///   (11/6) Tr drho - 6 Tr(rho drho) + (9/2) Tr(rho^2 drho) - (4/3) Tr(rho^3 drho).
/// Under unitary evolution every term vanishes identically, so the returned
/// value doubles as a truncation residual; this is an approximation probe,
/// not an exact rate. Use vn_entropy_rate_exact for the exact value.
double vn_entropy_rate_series(const DensityOperator& rho, const ComplexMatrix& drho);

/// Exact dS/dt by first-order eigenvalue perturbation:
/// -sum_k <v_k|drho|v_k> (ln lambda_k + 1), eigenvalues clamped to 1e-15
/// inside the logarithm.
double vn_entropy_rate_exact(const DensityOperator& rho, const ComplexMatrix& drho);

}  // namespace egt
