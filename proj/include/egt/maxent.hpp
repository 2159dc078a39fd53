#pragma once

#include <string>
#include <vector>

#include "egt/game.hpp"

namespace egt {

/// Finite set of energy levels E_i (arbitrary units).
class EnergySpectrum {
 public:
  explicit EnergySpectrum(Vector levels);

  int size() const { return static_cast<int>(levels_.size()); }
  const Vector& levels() const { return levels_; }
  double min() const { return levels_.minCoeff(); }
  double max() const { return levels_.maxCoeff(); }
  double mean() const { return levels_.mean(); }

 private:
  Vector levels_;
};

/// Canonical bundle for a spectrum at inverse temperature beta. The entropy
/// is S = ln Z + beta <E>; log_Z is carried alongside Z because Z itself can
/// overflow for |beta E| beyond ~700 while ln Z stays finite.
struct ThermoState {
  double beta = 0.0;
  double tau = 0.0;  // 1/beta; +inf at beta = 0
  double Z = 0.0;
  double log_Z = 0.0;
  double mean_energy = 0.0;
  double entropy = 0.0;
  double energy_variance = 0.0;
};

/// Entropy-maximizing distribution at fixed mean energy:
/// p_i = exp(-beta E_i) / Z, computed with max-shift stabilization. beta = 0
/// returns the uniform vector (every level equally populated); negative beta
/// (population inversion) is allowed.
Vector gibbs_distribution(const EnergySpectrum& E, double beta);

ThermoState thermo_state(const EnergySpectrum& E, double beta);

/// Inverse problem: the beta whose Gibbs mean energy matches the target,
/// within 1e-10 * (max E - min E). The mean energy is strictly decreasing in
/// beta, so the root is unique; found by bracket expansion and bisection.
/// Targets outside (min E, max E) are infeasible; constant spectra are
/// degenerate.
double solve_beta(const EnergySpectrum& E, double target_energy);

struct IdentityCheck {
  std::string name;
  bool skipped = false;
  std::string skip_reason;
  double analytic = 0.0;
  double finite_difference = 0.0;
  double relative_error = 0.0;
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  double h = 0.0;
  double tolerance = 0.0;
  bool all_pass = false;
};

/// Cross-checks the thermodynamic derivative identities of the canonical
/// ensemble against central finite differences in beta with step h:
///   <E>        = -d ln Z / d beta
///   <dE^2>     = -d <E> / d beta        and   -(1/beta) dS/d beta
///   dS/d<E>    = 1/tau
///   d2S/d<E>2  = -(1/tau^2) d tau / d<E>
///   dS/d beta  = -beta <dE^2>
///   d2S/dbeta2 = d<E>/dbeta + beta d2<E>/dbeta2
/// Each check reports the analytic value, the finite-difference value and the
/// relative error; a check passes at relative error <= 1e-5. Identities
/// carrying 1/beta factors are skipped at beta = 0 with an explicit marker.
IdentityReport verify_identities(const EnergySpectrum& E, double beta, double h = 1e-4);

/// Maximizing entropy without the energy constraint populates every level
/// equally: the uniform vector of length N.
Vector maxent_distribution_unconstrained(int N);

}  // namespace egt
