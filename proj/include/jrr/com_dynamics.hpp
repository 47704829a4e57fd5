#pragma once

#include "jrr/model.hpp"

// Center-of-mass fluctuation functions for the free dipole prepared in a
// thermal harmonic state. Kept behind an interface of two functions so a
// trapped-CM variant could slot in later without touching the kernel.

namespace jrr {

struct COMState {
  double chi;          // omega_I / omega_M
  double beta_omegaI;  // may be INFINITE
};

// Delta^2(tau) = [2 n + 1] tau^2 chi / 2, tau in units 1/omega_I.
double delta_sq(double tau, const COMState& s);

// G(tau) = theta(tau) tau chi, with theta(0) = 0. State independent.
double green_g(double tau, const COMState& s);

}  // namespace jrr
