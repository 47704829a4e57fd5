#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jrr/model.hpp"
#include "jrr/spectrum.hpp"

namespace jrr {

// Ford-Lewis-O'Connell positive-real-function certification: (i) analytic in
// the upper half plane, (ii) Re mu(omega + i0+) >= 0, (iii) mu(-omega) =
// conj(mu(omega)). Quantum statistics pass all three; classical statistics
// break (ii) over a broad parameter range while (i) and (iii) survive.

struct CriterionI {
  bool pass = false;
  double max_cr_residual = 0.0;
  std::string grid_spec;
  double observed_order = 0.0;    // fitted slope of log residual vs log h
  int n_floor_limited = 0;        // stencil points below the quadrature floor
  std::vector<std::string> flagged;
};

struct CriterionII {
  bool pass = false;
  double min_re_mu = 0.0;
  double argmin_omega = 0.0;
  double tol = 0.0;
  std::vector<double> flagged_omegas;  // excluded, quadrature did not converge
};

struct CriterionIII {
  bool pass = false;
  double max_asymmetry = 0.0;
};

struct Violation {
  double chi, beta_omegaI, omega, re_mu;
};

struct FLOReport {
  ReducedParams params;
  FieldStatistics stats = FieldStatistics::QUANTUM;
  CriterionI criterion_i;
  CriterionII criterion_ii;
  CriterionIII criterion_iii;
  std::optional<int> uhp_zero_count;  // populated only when the winding ran
  std::vector<Violation> violations;
};

// scale-aware default tolerance for criterion (ii)
inline double positivity_tol(const ReducedParams& p) { return 1e-8 * p.mu0; }

CriterionII check_positivity(const ReducedParams& params, FieldStatistics stats,
                             const std::vector<double>& omega_grid, double tol);

// grid must be symmetric about 0 and exclude 0
CriterionIII check_symmetry(const ReducedParams& params, FieldStatistics stats,
                            const std::vector<double>& omega_grid, double tol);

// diagnostic variant with a substitute boundary evaluator (fault injection,
// contract-path spot checks)
CriterionIII check_symmetry(const std::function<SpectrumSample(double)>& mu_at,
                            const std::vector<double>& omega_grid, double tol);

// Cauchy-Riemann residuals from central differences of mu at each grid
// point, for each h in h_sequence (decreasing). Every point needs
// Im z >= 2 max(h).
CriterionI check_analyticity(const ReducedParams& params, FieldStatistics stats,
                             const std::vector<std::complex<double>>& uhp_grid,
                             const std::vector<double>& h_sequence);

// diagnostic variant with a substitute evaluator; eval_tol feeds the noise
// floor below which residuals are not fit for the convergence order
CriterionI check_analyticity(
    const std::function<std::complex<double>(std::complex<double>)>& f,
    const std::vector<std::complex<double>>& uhp_grid,
    const std::vector<double>& h_sequence, double eval_tol);

struct ContourRect {
  double x_half;   // x in [-x_half, x_half]
  double y_lo, y_hi;
};

struct contour_resolution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct contour_degenerate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Winding number of F along the rectangle boundary by accumulated phase
// increments, each kept below pi by adaptive midpoint insertion.
int winding_number(const std::function<std::complex<double>(std::complex<double>)>& F,
                   const ContourRect& rect, int n_contour_points);

// Argument-principle zero count of F(z) = z^2 - w0^2 + i z mu(z) inside the
// rectangle. Quantum statistics: expected 0 (no runaway poles).
int count_uhp_zeros(const ReducedParams& params, FieldStatistics stats,
                    const ContourRect& rect, int n_contour_points);

// Cross-product scan over (chi, beta) cells with base supplying gamma_omegaI
// and omega0_over_omegaI; violations refined by bisection around sign
// changes of Re mu. Winding is skipped (uhp_zero_count left empty); run
// count_uhp_zeros separately where needed.
std::vector<FLOReport> scan(const ReducedParams& base,
                            const std::vector<double>& chi_grid,
                            const std::vector<double>& beta_grid,
                            const std::vector<double>& omega_grid,
                            FieldStatistics stats, double tol_scale = 1e-8);

std::string flo_reports_to_json(const std::vector<FLOReport>& reports);

}  // namespace jrr
