#include "jrr/model.hpp"

#include <cmath>

namespace jrr {

void PhysicalParams::validate() const {
  auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!pos(gamma) || !pos(omega0) || !pos(omegaI) || !pos(omegaM))
    throw std::domain_error("PhysicalParams: gamma, omega0, omegaI, omegaM must be positive finite");
  if (!(beta > 0.0))  // INFINITE passes, NaN and nonpositive do not
    throw std::domain_error("PhysicalParams: beta must be positive or INFINITE");
}

void ReducedParams::validate() const {
  if (!(chi > 0.0) || !std::isfinite(chi))
    throw std::domain_error("ReducedParams: chi must be positive finite");
  if (!(beta_omegaI > 0.0))
    throw std::domain_error("ReducedParams: beta_omegaI must be positive or INFINITE");
  if (!(mu0 > 0.0))
    throw std::domain_error("ReducedParams: mu0 must be positive");
}

double bose_occupancy(double x) {
  if (is_infinite(x)) return 0.0;
  if (!(x > 0.0)) throw std::domain_error("bose_occupancy: x must be positive");
  return 1.0 / std::expm1(x);
}

double coth_half(double x) {
  if (is_infinite(x)) return 1.0;
  if (!(x > 0.0)) throw std::domain_error("coth_half: x must be positive");
  return 1.0 + 2.0 / std::expm1(x);
}

double mu0_value(double gamma_omegaI, double chi, double beta_omegaI) {
  const double pi = M_PI;
  return gamma_omegaI / (4.0 * std::sqrt(pi * pi * pi * chi * coth_half(beta_omegaI)));
}

ReducedParams reduce(const PhysicalParams& p) {
  p.validate();
  ReducedParams r;
  r.chi = p.omegaI / p.omegaM;
  r.beta_omegaI = is_infinite(p.beta) ? INFINITE : p.beta * p.omegaI;
  r.gamma_omegaI = p.gamma * p.omegaI;
  r.omega0_over_omegaI = p.omega0 / p.omegaI;
  r.mu0 = mu0_value(r.gamma_omegaI, r.chi, r.beta_omegaI);
  r.validate();
  return r;
}

void require_valid_stats(FieldStatistics stats, double beta_omegaI) {
  if (stats == FieldStatistics::CLASSICAL && is_infinite(beta_omegaI))
    throw invalid_combination("CLASSICAL statistics with beta = INFINITE is not defined");
}

}  // namespace jrr
