#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "egt/info.hpp"
#include "egt/quantum.hpp"
#include "egt/replicator.hpp"

using egt::Complex;
using egt::ComplexMatrix;
using egt::ComplexVector;
using egt::DensityOperator;
using egt::Hamiltonian;
using egt::IntegratorConfig;
using egt::IntegratorMethod;
using egt::Matrix;
using egt::MixedStrategy;
using egt::PayoffMatrix;
using egt::Vector;

namespace {

PayoffMatrix prisoners_dilemma() {
  Matrix a(2, 2);
  a << 3, 0, 5, 1;
  return PayoffMatrix(a);
}

PayoffMatrix hawk_dove() {
  Matrix a(2, 2);
  a << -1, 2, 0, 1;
  return PayoffMatrix(a);
}

PayoffMatrix random_game(std::mt19937_64& rng, int n, double scale = 5.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
  }
  return PayoffMatrix(a);
}

MixedStrategy random_interior(std::mt19937_64& rng, int n, double floor = 0.05) {
  std::uniform_real_distribution<double> dist(floor, 1.0);
  Vector w(n);
  for (int i = 0; i < n; ++i) w(i) = dist(rng);
  w /= w.sum();
  return MixedStrategy(w);
}

MixedStrategy strategy(std::initializer_list<double> weights) {
  Vector w(static_cast<Eigen::Index>(weights.size()));
  Eigen::Index i = 0;
  for (double value : weights) w(i++) = value;
  return MixedStrategy(w);
}

Matrix random_antisymmetric(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = dist(rng);
      m(j, i) = -m(i, j);
    }
  }
  return m;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = Complex(dist(rng), 0.0);
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = Complex(dist(rng), dist(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

DensityOperator random_mixed_state(std::mt19937_64& rng, int n) {
  // random diagonal mixture rotated by a random unitary (eigenvectors of a
  // random Hermitian matrix)
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  Vector probs(n);
  for (int i = 0; i < n; ++i) probs(i) = dist(rng);
  probs /= probs.sum();
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(random_hermitian(rng, n));
  const ComplexMatrix u = solver.eigenvectors();
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    rho += Complex(probs(i), 0.0) * (u.col(i) * u.col(i).adjoint());
  }
  return DensityOperator(rho);
}

// Direct index-by-index evaluation of the four printed sums; kept loop-order
// independent of the trace-product implementation.
double series_rate_loops(const ComplexMatrix& rho, const ComplexMatrix& drho) {
  const int n = static_cast<int>(rho.rows());
  Complex first(0.0, 0.0);
  for (int i = 0; i < n; ++i) first += drho(i, i);
  Complex second(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) second += rho(i, j) * drho(j, i);
  }
  Complex third(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) third += rho(i, j) * rho(j, k) * drho(k, i);
    }
  }
  Complex fourth(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          fourth += rho(i, j) * rho(j, k) * rho(k, l) * drho(l, i);
        }
      }
    }
  }
  const Complex total = (11.0 / 6.0) * first - 6.0 * second + (9.0 / 2.0) * third -
                        (4.0 / 3.0) * fourth;
  return total.real();
}

}  // namespace

TEST_CASE("density operators from ensembles") {
  ComplexVector e0 = ComplexVector::Zero(2);
  e0(0) = 1.0;
  ComplexVector e1 = ComplexVector::Zero(2);
  e1(1) = 1.0;
  ComplexVector plus(2);
  plus << Complex(1.0 / std::sqrt(2.0), 0.0), Complex(1.0 / std::sqrt(2.0), 0.0);

  const auto single = egt::density_from_ensemble({e0}, Vector::Constant(1, 1.0));
  CHECK(single.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(single.matrix()(1, 1)) == 0.0);

  const auto classical = egt::density_from_ensemble({e0, e1}, Vector::Constant(2, 0.5));
  CHECK(classical.matrix()(0, 0).real() == doctest::Approx(0.5));
  CHECK(classical.matrix()(1, 1).real() == doctest::Approx(0.5));
  CHECK(std::abs(classical.matrix()(0, 1)) == doctest::Approx(0.0));

  const auto tilted = egt::density_from_ensemble({e0, plus}, Vector::Constant(2, 0.5));
  CHECK(tilted.matrix()(0, 0).real() == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(tilted.matrix()(0, 1).real() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(tilted.matrix()(1, 0).real() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(tilted.matrix()(1, 1).real() == doctest::Approx(0.25).epsilon(1e-14));

  // rejects non-normalized states and invalid probabilities
  ComplexVector big = 2.0 * e0;
  CHECK_THROWS_AS(egt::density_from_ensemble({big}, Vector::Constant(1, 1.0)),
                  egt::ValidationError);
  CHECK_THROWS_AS(egt::density_from_ensemble({e0, e1}, Vector::Constant(2, 0.7)),
                  egt::ValidationError);
}

TEST_CASE("density operator validation") {
  ComplexMatrix not_hermitian(2, 2);
  not_hermitian << Complex(0.5, 0.0), Complex(0.1, 0.0), Complex(0.3, 0.0), Complex(0.5, 0.0);
  CHECK_THROWS_AS(DensityOperator{not_hermitian}, egt::ValidationError);

  ComplexMatrix wrong_trace = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator{wrong_trace}, egt::ValidationError);

  ComplexMatrix indefinite(2, 2);
  indefinite << Complex(1.5, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(-0.5, 0.0);
  CHECK_THROWS_AS(DensityOperator{indefinite}, egt::ValidationError);
}

TEST_CASE("quantization produces pure states with the right diagonal") {
  const auto rho = egt::quantize(MixedStrategy::uniform(2));
  CHECK((rho.matrix().cwiseAbs().array() - 0.5).abs().maxCoeff() < 1e-15);

  const auto vertex = egt::quantize(MixedStrategy::pure(3, 0));
  CHECK(vertex.matrix()(0, 0).real() == 1.0);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto x = random_interior(rng, n);
    const auto state = egt::quantize(x);
    CHECK(state.purity() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(egt::von_neumann_entropy(state) == doctest::Approx(0.0).epsilon(1e-10));
    // diagonal carries the classical distribution
    CHECK((state.matrix().diagonal().real() - x.weights()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(egt::shannon_entropy(state.matrix().diagonal().real()) ==
          doctest::Approx(egt::shannon_entropy(x.weights())).epsilon(1e-12));
  }
}

TEST_CASE("hamiltonian from the antisymmetric generator") {
  const Matrix zero = Matrix::Zero(3, 3);
  CHECK(egt::hamiltonian_from_lambda(zero).matrix().isZero());

  const Matrix lambda = egt::lambda_matrix(MixedStrategy::uniform(2), prisoners_dilemma());
  const Hamiltonian h = egt::hamiltonian_from_lambda(lambda, 1.0);
  CHECK(h.matrix()(0, 1) == Complex(0.0, -0.375));
  CHECK(h.matrix()(1, 0) == Complex(0.0, 0.375));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const Hamiltonian random_h = egt::hamiltonian_from_lambda(random_antisymmetric(rng, n), 1.0);
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(random_h.matrix());
    CHECK(solver.eigenvalues().allFinite());  // real spectrum by construction
    CHECK((random_h.matrix() - random_h.matrix().adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  }

  Matrix not_antisymmetric = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(egt::hamiltonian_from_lambda(not_antisymmetric), egt::ValidationError);
}

TEST_CASE("von neumann rhs basics") {
  // commuting pair: both diagonal
  ComplexMatrix diag_rho = ComplexMatrix::Zero(2, 2);
  diag_rho(0, 0) = 0.75;
  diag_rho(1, 1) = 0.25;
  ComplexMatrix diag_h = ComplexMatrix::Zero(2, 2);
  diag_h(0, 0) = 1.0;
  diag_h(1, 1) = -2.0;
  CHECK(egt::von_neumann_rhs(DensityOperator(diag_rho), Hamiltonian(diag_h)).isZero());

  // maximally mixed state commutes with everything
  std::mt19937_64 rng(23);
  const ComplexMatrix h = random_hermitian(rng, 3);
  const DensityOperator mixed(ComplexMatrix(ComplexMatrix::Identity(3, 3) / 3.0));
  CHECK(egt::von_neumann_rhs(mixed, Hamiltonian(h)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("von neumann rhs is hermitian and traceless") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const DensityOperator rho = random_mixed_state(rng, n);
    const Hamiltonian h(random_hermitian(rng, n));
    const ComplexMatrix rhs = egt::von_neumann_rhs(rho, h);
    CHECK(std::abs(rhs.trace()) <= 1e-12);
    CHECK((rhs - rhs.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("quantized replicator state reproduces the vector field on the diagonal") {
  const auto x = MixedStrategy::uniform(2);
  const auto game = prisoners_dilemma();
  const auto rho = egt::quantize(x);
  const auto h = egt::hamiltonian_from_lambda(egt::lambda_matrix(x, game), 1.0);
  const ComplexMatrix rhs = egt::von_neumann_rhs(rho, h);
  const Vector vector_rhs = egt::replicator_rhs(x, game);
  CHECK((rhs.diagonal().real() - vector_rhs).cwiseAbs().maxCoeff() <= 1e-12);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const auto game2 = random_game(rng, n);
    const auto y = random_interior(rng, n);
    const auto rho2 = egt::quantize(y);
    const auto h2 = egt::hamiltonian_from_lambda(egt::lambda_matrix(y, game2), 1.0);
    const ComplexMatrix rhs2 = egt::von_neumann_rhs(rho2, h2);
    CHECK((rhs2.diagonal().real() - egt::replicator_rhs(y, game2)).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("evolution under a zero or commuting hamiltonian is constant") {
  const DensityOperator rho0 = egt::quantize(strategy({0.7, 0.3}));
  const IntegratorConfig cfg{IntegratorMethod::rk4, 1e-2, 1.0, false};

  const auto frozen = egt::evolve(rho0, Hamiltonian(ComplexMatrix::Zero(2, 2)), cfg);
  CHECK((frozen.states.back().matrix() - rho0.matrix()).cwiseAbs().maxCoeff() == 0.0);

  ComplexMatrix diag_h = ComplexMatrix::Zero(2, 2);
  diag_h(0, 0) = 2.0;
  diag_h(1, 1) = -1.0;
  ComplexMatrix diag_rho = ComplexMatrix::Zero(2, 2);
  diag_rho(0, 0) = 0.25;
  diag_rho(1, 1) = 0.75;
  const auto still = egt::evolve(DensityOperator(diag_rho), Hamiltonian(diag_h), cfg);
  CHECK((still.states.back().matrix() - diag_rho).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("unitary evolution conserves trace, purity, spectrum and entropy") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 3;
    const DensityOperator rho0 = random_mixed_state(rng, n);
    const Hamiltonian h(random_hermitian(rng, n));
    const IntegratorConfig cfg{IntegratorMethod::rk4, 1e-3, 10.0, false};
    const auto evolution = egt::evolve(rho0, h, cfg);

    CHECK(evolution.max_trace_drift() <= 1e-7);
    CHECK(evolution.max_hermiticity_drift() <= 1e-12);
    CHECK(evolution.max_purity_excess() <= 1e-7);
    CHECK(std::abs(evolution.purity.back() - rho0.purity()) <= 1e-7);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> initial(rho0.matrix(), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> final(evolution.states.back().matrix(),
                                                       Eigen::EigenvaluesOnly);
    CHECK((initial.eigenvalues() - final.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-7);

    const double s0 = egt::von_neumann_entropy(rho0);
    for (std::size_t k = 0; k < evolution.size(); k += 1000) {
      CHECK(std::abs(egt::von_neumann_entropy(evolution.states[k]) - s0) <= 1e-6);
    }
  }
}

TEST_CASE("self-consistent evolution tracks the replicator trajectory") {
  const IntegratorConfig cfg{IntegratorMethod::rk4, 1e-3, 10.0, false};
  IntegratorConfig vector_cfg = cfg;
  vector_cfg.renormalize = true;

  const auto x0 = strategy({0.9, 0.1});
  const auto evolution = egt::evolve_self_consistent(egt::quantize(x0), hawk_dove(), 1.0, cfg);
  const auto traj = egt::integrate(x0, hawk_dove(), vector_cfg);

  REQUIRE(evolution.size() == traj.size());
  double worst_diag = 0.0;
  for (std::size_t k = 0; k < evolution.size(); ++k) {
    const Vector diff =
        evolution.states[k].matrix().diagonal().real() - traj.states[k].weights();
    worst_diag = std::max(worst_diag, diff.cwiseAbs().maxCoeff());
  }
  CHECK(worst_diag <= 1e-5);

  // the full matrix reproduces the frequency matrix of the vector flow
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    const auto game = random_game(rng, 3);
    const auto y0 = random_interior(rng, 3);
    const auto evo = egt::evolve_self_consistent(egt::quantize(y0), game, 1.0, cfg);
    const auto vec = egt::integrate(y0, game, vector_cfg);
    double worst = 0.0;
    for (std::size_t k = 0; k < evo.size(); ++k) {
      const Matrix expected = egt::detail::freq_from_raw(vec.states[k].weights());
      const double diff =
          (evo.states[k].matrix() - expected.cast<Complex>()).cwiseAbs().maxCoeff();
      worst = std::max(worst, diff);
    }
    CHECK(worst <= 1e-5);
    CHECK(evo.max_trace_drift() <= 1e-7);
    CHECK(evo.max_purity_excess() <= 1e-10);
  }
}

TEST_CASE("hbar does not change the self-consistent flow") {
  const IntegratorConfig cfg{IntegratorMethod::rk4, 1e-2, 2.0, false};
  const auto x0 = strategy({0.6, 0.4});
  const auto natural = egt::evolve_self_consistent(egt::quantize(x0), hawk_dove(), 1.0, cfg);
  const auto scaled = egt::evolve_self_consistent(egt::quantize(x0), hawk_dove(), 2.5, cfg);
  CHECK((natural.states.back().matrix() - scaled.states.back().matrix())
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("von neumann entropy examples") {
  const DensityOperator pure = egt::quantize(MixedStrategy::uniform(3));
  CHECK(egt::von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-10));

  const DensityOperator mixed(ComplexMatrix(ComplexMatrix::Identity(4, 4) / 4.0));
  CHECK(egt::von_neumann_entropy(mixed) == doctest::Approx(std::log(4.0)).epsilon(1e-12));

  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 0.75;
  diag(1, 1) = 0.25;
  CHECK(egt::von_neumann_entropy(DensityOperator(diag)) ==
        doctest::Approx(0.562335144618809).epsilon(1e-12));

  // eigenvalues in [-1e-10, 0) are clamped, lower ones rejected
  ComplexMatrix noisy = ComplexMatrix::Zero(2, 2);
  noisy(0, 0) = 1.0 + 5e-11;
  noisy(1, 1) = -5e-11;
  CHECK(egt::von_neumann_entropy(DensityOperator::unchecked(noisy)) == 0.0);
  ComplexMatrix invalid = ComplexMatrix::Zero(2, 2);
  invalid(0, 0) = 1.5;
  invalid(1, 1) = -0.5;
  CHECK_THROWS_AS(egt::von_neumann_entropy(DensityOperator::unchecked(invalid)),
                  egt::ValidationError);
}

TEST_CASE("entropy of a diagonal state equals the shannon entropy") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto x = random_interior(rng, n);
    ComplexMatrix diag = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) diag(i, i) = x[i];
    CHECK(egt::von_neumann_entropy(DensityOperator(diag)) ==
          doctest::Approx(egt::shannon_entropy(x.weights())).epsilon(1e-12));
  }
}

TEST_CASE("series rate: zero derivative gives zero") {
  const DensityOperator rho = egt::quantize(MixedStrategy::uniform(3));
  CHECK(egt::vn_entropy_rate_series(rho, ComplexMatrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("series rate matches the loop-order oracle") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const DensityOperator rho = random_mixed_state(rng, n);
    // traceless Hermitian perturbation
    ComplexMatrix drho = random_hermitian(rng, n, 0.5);
    const Complex shift = drho.trace() / static_cast<double>(n);
    for (int i = 0; i < n; ++i) drho(i, i) -= shift;

    const double via_traces = egt::vn_entropy_rate_series(rho, drho);
    const double via_loops = series_rate_loops(rho.matrix(), drho);
    CHECK(via_traces == doctest::Approx(via_loops).epsilon(1e-10));
  }

  // maximally mixed state: the first term drops, the rest survive
  const int n = 3;
  const DensityOperator mixed(ComplexMatrix(ComplexMatrix::Identity(n, n) / double(n)));
  std::mt19937_64 rng2(53);
  ComplexMatrix drho = random_hermitian(rng2, n, 0.5);
  const Complex shift = drho.trace() / static_cast<double>(n);
  for (int i = 0; i < n; ++i) drho(i, i) -= shift;
  CHECK(egt::vn_entropy_rate_series(mixed, drho) ==
        doctest::Approx(series_rate_loops(mixed.matrix(), drho)).epsilon(1e-12));
}

TEST_CASE("series rate vanishes along unitary flows") {
  // each trace term is cyclically invariant, so a commutator derivative
  // annihilates the whole truncation
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const DensityOperator rho = random_mixed_state(rng, n);
    const Hamiltonian h(random_hermitian(rng, n));
    const ComplexMatrix drho = egt::von_neumann_rhs(rho, h);
    CHECK(std::abs(egt::vn_entropy_rate_series(rho, drho)) <= 1e-12);
    CHECK(std::abs(egt::vn_entropy_rate_exact(rho, drho)) <= 1e-10);
  }
}

TEST_CASE("time-dependent hamiltonian sources drive the evolution") {
  std::mt19937_64 rng(67);
  const ComplexMatrix h0 = random_hermitian(rng, 3);
  const DensityOperator rho0 = random_mixed_state(rng, 3);
  const IntegratorConfig cfg{IntegratorMethod::rk4, 1e-3, 2.0, false};

  // a constant source agrees with the fixed-Hamiltonian overload exactly
  const auto via_source =
      egt::evolve(rho0, [&h0](double) { return h0; }, 1.0, cfg);
  const auto via_fixed = egt::evolve(rho0, Hamiltonian(h0), cfg);
  CHECK((via_source.states.back().matrix() - via_fixed.states.back().matrix())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // a modulated source still conserves trace and hermiticity
  const auto modulated = egt::evolve(
      rho0, [&h0](double t) { return ComplexMatrix(std::cos(t) * h0); }, 1.0, cfg);
  CHECK(modulated.max_trace_drift() <= 1e-10);
  CHECK(modulated.max_hermiticity_drift() <= 1e-12);
}

TEST_CASE("series and exact rates reject mismatched dimensions") {
  const DensityOperator rho = egt::quantize(MixedStrategy::uniform(3));
  CHECK_THROWS_AS(egt::vn_entropy_rate_series(rho, ComplexMatrix::Zero(2, 2)),
                  egt::DimensionError);
  CHECK_THROWS_AS(egt::vn_entropy_rate_exact(rho, ComplexMatrix::Zero(2, 2)),
                  egt::DimensionError);
}

TEST_CASE("exact rate matches a finite difference for non-unitary perturbations") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3;
    const DensityOperator rho = random_mixed_state(rng, n);
    ComplexMatrix drho = random_hermitian(rng, n, 0.1);
    const Complex shift = drho.trace() / static_cast<double>(n);
    for (int i = 0; i < n; ++i) drho(i, i) -= shift;

    const double eps = 1e-6;
    const double forward =
        egt::von_neumann_entropy(DensityOperator::unchecked(rho.matrix() + eps * drho));
    const double backward =
        egt::von_neumann_entropy(DensityOperator::unchecked(rho.matrix() - eps * drho));
    const double fd = (forward - backward) / (2.0 * eps);
    CHECK(egt::vn_entropy_rate_exact(rho, drho) == doctest::Approx(fd).epsilon(1e-6));
  }
}
