#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "jrr/kernel.hpp"
#include "jrr/model.hpp"

namespace jrr {

enum class TrajectoryModel { CLASSICAL_AL, AMENDED_SPECTRAL, AMENDED_VOLTERRA };

struct Trajectory {
  std::vector<double> ts;   // strictly increasing
  std::vector<double> rs;   // one Cartesian component, amplitude units of r0
  TrajectoryModel model = TrajectoryModel::CLASSICAL_AL;
  std::string time_unit;    // "1/omega0" or "1/omegaI"
  std::map<std::string, std::string> meta;  // params snapshot and choices
};

// roots of i gamma z^3 + z^2 - omega0^2 (modes e^{-izt}); exactly one is
// purely imaginary with Im ~ 1/gamma, the runaway
struct CharRoots {
  std::array<std::complex<double>, 3> roots;  // oscillatory pair, then runaway
};

struct runaway_overflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct near_resonance_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct bandwidth_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CharRoots al_char_roots(double gamma, double omega0);

// Exact mode superposition for the classical Abraham-Lorentz equation.
// The third condition on the coefficients is a(0) = 0 (exhibits the runaway
// growth) unless suppress_runaway, which zeroes the runaway mode instead.
Trajectory al_trajectory(double gamma, double omega0, double r0, double v0,
                         double T, double dt, bool suppress_runaway);

// alpha(omega) = 1/(omega0^2 - omega^2 - i omega mu(omega + i0+)), reduced units
std::vector<std::complex<double>> amended_response(
    const std::vector<double>& omega_grid, const ReducedParams& params,
    FieldStatistics stats);

// diagnostic variant with a substitute boundary mu (mu = 0 gives the free
// oscillator response exactly)
std::vector<std::complex<double>> amended_response(
    const std::vector<double>& omega_grid, const ReducedParams& params,
    const std::function<std::complex<double>(double)>& mu_of_omega);

// Inverse-transform synthesis of the homogeneous amended dynamics on a
// 2x-padded window: the free-response reference is subtracted in the
// frequency domain (the remainder decays fast enough for the discrete grid),
// synthesized along the damped line Im z = eta, and undamped pointwise;
// initial conditions imposed by a 2x2 solve on two independent syntheses.
// Returns n_samples points spanning [0, T).
Trajectory amended_trajectory(double r0, double v0, double T,
                              std::size_t n_samples, const ReducedParams& params,
                              FieldStatistics stats);

// diagnostic variant with a substitute mu(z) on the synthesis line
Trajectory amended_trajectory(
    double r0, double v0, double T, std::size_t n_samples,
    const ReducedParams& params, FieldStatistics stats,
    const std::function<std::complex<double>(std::complex<double>)>& mu_of_z);

// Diagnostic time-domain product-integration of the memory equation with the
// kernel's (0, tau_min] contribution dropped (singular tail). dt > tau_min.
Trajectory volterra_evolve(double r0, double v0, double T, double dt,
                           double tau_min, const ReducedParams& params,
                           FieldStatistics stats);

// same, with a caller-supplied kernel table (must cover j*dt for all steps)
Trajectory volterra_evolve(double r0, double v0, double T, double dt,
                           double tau_min, const ReducedParams& params,
                           FieldStatistics stats, const KernelTable& table);

}  // namespace jrr
