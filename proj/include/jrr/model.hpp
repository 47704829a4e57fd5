#pragma once

#include <limits>
#include <stdexcept>

// Natural units (hbar = c = kB = 1). Everything downstream works in the
// dimensionless groups produced by reduce(); frequencies are measured in
// units of the initial trap frequency omega_I.

namespace jrr {

// Zero temperature is a first-class value, not a large float.
inline constexpr double INFINITE = std::numeric_limits<double>::infinity();

inline bool is_infinite(double x) { return x == INFINITE; }

enum class FieldStatistics { QUANTUM, CLASSICAL };

struct PhysicalParams {
  double gamma;    // radiation reaction damping constant, units of time
  double omega0;   // dipole oscillator frequency
  double omegaI;   // initial trap frequency of the thermal CM state
  double omegaM;   // Compton frequency (dipole mass)
  double beta;     // inverse temperature, may be INFINITE

  void validate() const;
};

struct ReducedParams {
  double chi;                // omega_I / omega_M
  double beta_omegaI;        // beta * omega_I, may be INFINITE
  double gamma_omegaI;       // gamma * omega_I
  double omega0_over_omegaI;
  double mu0;                // positive prefactor of the spectral distribution

  void validate() const;
};

// n(x) = 1/(e^x - 1); x = INFINITE gives 0. Stable down to tiny x via expm1.
double bose_occupancy(double x);

// coth(x/2) = 1 + 2 n(x); equals 1 at x = INFINITE.
double coth_half(double x);

// Collapse physical inputs to the dimensionless groups. Single
// nondimensionalization point for the whole library.
ReducedParams reduce(const PhysicalParams& p);

// mu0 from the reduced groups directly (used by reduce and by tests).
double mu0_value(double gamma_omegaI, double chi, double beta_omegaI);

// CLASSICAL field statistics require finite temperature.
void require_valid_stats(FieldStatistics stats, double beta_omegaI);

struct invalid_combination : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace jrr
