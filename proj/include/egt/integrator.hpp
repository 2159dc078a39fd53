#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "egt/errors.hpp"

namespace egt {

enum class IntegratorMethod { euler, rk4 };

const char* to_string(IntegratorMethod method);
IntegratorMethod integrator_method_from_string(const std::string& name);

// Fixed-step configuration shared by the vector, matrix and density-operator
// integrators. Steps are never adapted; trajectories on the compact simplex
// are well-conditioned at these scales.
struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::rk4;
  double dt = 1e-3;
  double t_end = 10.0;
  bool renormalize = true;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw ValidationError("integrator dt must be positive and finite");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
      throw ValidationError("integrator t_end must be positive and finite");
    }
    if (!(dt < t_end)) {
      throw ValidationError("integrator dt must be smaller than t_end");
    }
  }

  // Number of fixed steps; the final time lands within one dt of t_end.
  long long step_count() const {
    long long n = std::llround(t_end / dt);
    return n < 1 ? 1 : n;
  }
};

namespace detail {

template <class State, class Rhs>
State euler_step(const State& y, double t, double dt, Rhs&& f) {
  State k1 = f(t, y);
  return y + dt * k1;
}

template <class State, class Rhs>
State rk4_step(const State& y, double t, double dt, Rhs&& f) {
  State k1 = f(t, y);
  State k2 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k1));
  State k3 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k2));
  State k4 = f(t + dt, State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class State, class Rhs>
State advance(IntegratorMethod method, const State& y, double t, double dt, Rhs&& f) {
  switch (method) {
    case IntegratorMethod::euler:
      return euler_step(y, t, dt, std::forward<Rhs>(f));
    case IntegratorMethod::rk4:
    default:
      return rk4_step(y, t, dt, std::forward<Rhs>(f));
  }
}

}  // namespace detail
}  // namespace egt
