#pragma once

#include <complex>
#include <string>
#include <vector>

#include "jrr/com_dynamics.hpp"
#include "jrr/model.hpp"
#include "jrr/quadrature.hpp"

namespace jrr {

struct KernelTable {
  std::vector<double> taus;           // strictly increasing, all > tau_min
  std::vector<double> values;         // D(tau), units omega_I^4
  std::vector<double> err_estimates;  // absolute quadrature error bounds
  FieldStatistics stats;
  ReducedParams params;
};

// D(tau) blows up non-integrably toward tau = 0; pointwise evaluation is guarded.
inline constexpr double default_tau_min = 1e-3;

struct singularity_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Field correlation function. QUANTUM: theta(tau) sin(w tau) + (i/2) coth(beta w/2) cos(w tau);
// CLASSICAL replaces the coth weight by 1/(beta w). theta(0) = 0.
std::complex<double> gamma_fn(double omega, double tau, double beta,
                              FieldStatistics stats);

// Memory kernel D(tau): semi-infinite quadrature of
//   (2pi)^-2 w^3 exp(-w^2 Delta^2/2) [cos(w^2 G/2) Re Gamma + 2 sin(w^2 G/2) Im Gamma].
// Returns value and an absolute error estimate.
std::pair<double, double> memory_kernel_d(double tau, const ReducedParams& params,
                                          FieldStatistics stats, double tol,
                                          double tau_min = default_tau_min);

KernelTable kernel_table(const std::vector<double>& tau_grid,
                         const ReducedParams& params, FieldStatistics stats,
                         double tol, double tau_min = default_tau_min);

// D(tau; chi_k) along a strictly decreasing chi sequence; the trend toward 0
// realizes the fixed-dipole (Markov) limit at fixed tau > 0.
std::vector<double> markov_limit_probe(double tau,
                                       const std::vector<double>& chi_sequence,
                                       const ReducedParams& params,
                                       FieldStatistics stats, double tol,
                                       double tau_min = default_tau_min);

}  // namespace jrr
