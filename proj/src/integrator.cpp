#include "egt/integrator.hpp"

namespace egt {

const char* to_string(IntegratorMethod method) {
  switch (method) {
    case IntegratorMethod::euler: return "euler";
    case IntegratorMethod::rk4: return "rk4";
  }
  return "rk4";
}

IntegratorMethod integrator_method_from_string(const std::string& name) {
  if (name == "euler") return IntegratorMethod::euler;
  if (name == "rk4") return IntegratorMethod::rk4;
  throw ValidationError("unknown integrator method '" + name + "' (expected euler or rk4)");
}

}  // namespace egt
