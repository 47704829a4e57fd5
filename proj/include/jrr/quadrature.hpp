#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace jrr {

struct QuadResult {
  std::complex<double> value{0.0, 0.0};
  double err = 0.0;       // absolute error estimate
  long n_evals = 0;
  bool converged = false;
};

struct convergence_error : std::runtime_error {
  QuadResult partial;
  explicit convergence_error(const std::string& what, QuadResult p)
      : std::runtime_error(what), partial(p) {}
};

// Integrands receive the abscissa in extended precision. Far from the origin
// a double-rounded node coordinate carries a phase error ~ w * eps, and for
// strongly cancelling oscillatory integrals that node noise, coherent across
// panels, dominates everything else. Callables taking plain double still bind;
// only phase-critical integrands need to keep the long double argument.
using integrand = std::function<std::complex<double>(long double)>;

// Adaptive Gauss-Kronrod 7-15 on a finite interval. Splits the worst panel
// until the accumulated error estimate meets max(tol_abs, tol_rel*|value|).
// Deterministic: panel ordering ties broken by interval position.
QuadResult adaptive_gk(const integrand& f, double a, double b,
                       double tol_abs, double tol_rel,
                       int max_panels = 20000,
                       const std::vector<double>& breakpoints = {});

// Semi-infinite quadrature for integrands with a Gaussian envelope
// exp(-w^2/(2 sigma^2)) times polynomial growth up to w^3. Panels sized by
// the supplied oscillation scales (half-period pi/s each); marching stops
// when the analytic Gaussian tail bound drops below tol * |value|.
QuadResult integrate_semi_infinite(const integrand& f, double envelope_scale,
                                   const std::vector<double>& oscillation_scales,
                                   double tol);

// Principal value of  integral f(y)/(y - pole) dy  over the real line.
// f must be smooth at the pole; the 1/(y-pole) factor lives here. Symmetric
// pair subtraction inside |y-pole| < half_width, plain quadrature outside,
// expanding panels until contributions vanish (f must decay).
QuadResult integrate_pv(const integrand& f, double pole, double half_width,
                        double tol);

struct RichardsonResult {
  std::complex<double> limit{0.0, 0.0};
  double err = 0.0;
  double detected_order = 0.0;
  bool low_confidence = false;
};

// Polynomial (Neville) extrapolation of values(eta_k) to eta -> 0.
// order_hint is advisory only; err is the spread of the last two levels.
RichardsonResult richardson(const std::vector<std::complex<double>>& values,
                            const std::vector<double>& etas,
                            double order_hint = 1.0);

}  // namespace jrr
