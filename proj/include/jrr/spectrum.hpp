#pragma once

#include <complex>
#include <optional>

#include "jrr/model.hpp"
#include "jrr/quadrature.hpp"

namespace jrr {

struct SpectrumSample {
  std::optional<double> omega;                 // boundary evaluation point
  std::optional<std::complex<double>> z;       // complex evaluation point
  double re_mu = 0.0, im_mu = 0.0;
  double re_err = 0.0, im_err = 0.0;
  FieldStatistics stats = FieldStatistics::QUANTUM;

  std::complex<double> mu() const { return {re_mu, im_mu}; }
};

// K+- pair: differences of Gaussians in y with centers drifting in x.
std::pair<double, double> k_pm(double x, double y, double chi, double beta_omegaI);

// u(x,y) = K+ + n(beta omega_I x) [K+ + K-]; reduces to K+ at beta = INFINITE.
double u_quantum(double x, double y, double chi, double beta_omegaI);

// u_c = (1/2)[K+ - K-] + (1/(beta omega_I x))[K+ + K-]; finite beta only.
double u_classical(double x, double y, double chi, double beta_omegaI);

double u_fn(double x, double y, double chi, double beta_omegaI, FieldStatistics stats);

// The x integral of the spectral distribution diverges as written: the
// integrand's large-x expansion carries a1*x + a0 + a-1/x whose integral is
// the spring-constant renormalization absorbed into kappa in the underlying
// theory. We evaluate the Hadamard finite part: subtract the analytic
// divergence D(X) = a1 X^2/2 + a0 X + a-1 ln X from the running integral
// I(X) and extrapolate K(X) = I(X) - D(X) to X -> infinity on a geometric
// ladder (Richardson in 1/X). The coefficients below define that scheme.
struct TailCoeffs {
  double a1, a0, am1;
};
TailCoeffs spectrum_tail_coeffs(double chi, double beta_omegaI, FieldStatistics stats);

// mu(z) for Im z > 0 by nested adaptive quadrature (inner y, outer x) with
// the finite-part ladder. tol is a relative target on mu.
SpectrumSample mu_complex(std::complex<double> z, const ReducedParams& params,
                          FieldStatistics stats, double tol);

// Boundary value mu(omega + i0+): Re from the delta term (single absolutely
// convergent x integral), Im from the principal-value double integral under
// the same finite-part ladder.
SpectrumSample mu_boundary(double omega, const ReducedParams& params,
                           FieldStatistics stats, double tol);

// Just the Re part of mu_boundary and its error bound; much cheaper than the
// full sample (no principal-value ladder), which matters in positivity scans.
std::pair<double, double> re_mu_boundary(double omega, const ReducedParams& params,
                                         FieldStatistics stats, double tol);

// Fast evaluator for scans, contours and synthesis grids: same finite-part
// ladder, but the inner y integral is the exact Gaussian Hilbert transform
// via the Faddeeva function instead of nested quadrature. Agrees with
// mu_complex within tolerances (consistency-tested); not the contract path.
std::complex<double> mu_fast(std::complex<double> z, const ReducedParams& params,
                             FieldStatistics stats, double tol = 1e-9);

// Boundary counterpart of mu_fast: Re as in mu_boundary, Im from the same
// ladder with the principal value in closed form (the real-axis limit of the
// Faddeeva inner is the Dawson integral). Consistency-tested against
// mu_boundary; the FLO scans run on this.
SpectrumSample mu_boundary_fast(double omega, const ReducedParams& params,
                                FieldStatistics stats, double tol = 1e-9);

}  // namespace jrr
