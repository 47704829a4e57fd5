#include "jrr/com_dynamics.hpp"

namespace jrr {

double delta_sq(double tau, const COMState& s) {
  if (tau < 0.0) throw std::domain_error("delta_sq: tau must be >= 0");
  return coth_half(s.beta_omegaI) * tau * tau * s.chi / 2.0;
}

double green_g(double tau, const COMState& s) {
  return tau > 0.0 ? tau * s.chi : 0.0;
}

}  // namespace jrr
