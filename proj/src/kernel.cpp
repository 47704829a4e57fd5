#include "jrr/kernel.hpp"

#include <cmath>

#include "jrr/parallel.hpp"

namespace jrr {

std::complex<double> gamma_fn(double omega, double tau, double beta,
                              FieldStatistics stats) {
  if (!(omega > 0.0)) throw std::domain_error("gamma_fn: omega must be positive");
  const double re = tau > 0.0 ? std::sin(omega * tau) : 0.0;
  double im;
  if (stats == FieldStatistics::QUANTUM) {
    im = 0.5 * coth_half(is_infinite(beta) ? INFINITE : beta * omega) *
         std::cos(omega * tau);
  } else {
    require_valid_stats(stats, beta);
    im = std::cos(omega * tau) / (beta * omega);
  }
  return {re, im};
}

std::pair<double, double> memory_kernel_d(double tau, const ReducedParams& params,
                                          FieldStatistics stats, double tol,
                                          double tau_min) {
  if (!(tol > 1e-12 && tol < 1e-2))
    throw std::domain_error("memory_kernel_d: tol must lie in (1e-12, 1e-2)");
  if (!(tau > tau_min))
    throw singularity_error(
        "memory_kernel_d: tau <= tau_min; D has a non-integrable short-time "
        "singularity");
  require_valid_stats(stats, params.beta_omegaI);

  const COMState cs{params.chi, params.beta_omegaI};
  const double d2 = delta_sq(tau, cs);
  const double g = green_g(tau, cs);
  const double bt = params.beta_omegaI;
  const double pref = 1.0 / (4.0 * M_PI * M_PI);

  const auto f = [&](long double w) -> std::complex<double> {
    if (w <= 0.0L) return 0.0;
    const double wd = static_cast<double>(w);
    const double gauss = std::exp(-0.5 * wd * wd * d2);
    if (gauss == 0.0) return 0.0;
    // phases in the abscissa's extended precision: deep in the cancelling
    // regime (chi -> 0) double-rounded phases alias into a systematic bias
    const long double phase = 0.5L * w * w * g;
    const double cp = static_cast<double>(std::cos(phase));
    const double sp = static_cast<double>(std::sin(phase));
    const double re_gam = static_cast<double>(std::sin(w * tau));
    const double ct = static_cast<double>(std::cos(w * tau));
    double im2;  // 2 Im Gamma
    if (stats == FieldStatistics::QUANTUM)
      im2 = coth_half(is_infinite(bt) ? INFINITE : bt * wd) * ct;
    else
      im2 = 2.0 * ct / (bt * wd);
    return pref * wd * wd * wd * gauss * (cp * re_gam + sp * im2);
  };

  // Gaussian envelope scale and the two oscillation rates (plain + chirp)
  const double sigma = 1.0 / std::sqrt(d2);
  const std::vector<double> osc{tau, std::sqrt(g)};
  QuadResult q = integrate_semi_infinite(f, sigma, osc, tol);
  return {q.value.real(), q.err};
}

KernelTable kernel_table(const std::vector<double>& tau_grid,
                         const ReducedParams& params, FieldStatistics stats,
                         double tol, double tau_min) {
  for (size_t i = 0; i + 1 < tau_grid.size(); ++i)
    if (!(tau_grid[i] < tau_grid[i + 1]))
      throw std::domain_error("kernel_table: tau grid must be strictly increasing");
  if (!tau_grid.empty() && !(tau_grid.front() > tau_min))
    throw singularity_error("kernel_table: grid min must exceed tau_min");

  KernelTable t;
  t.taus = tau_grid;
  t.values.resize(tau_grid.size());
  t.err_estimates.resize(tau_grid.size());
  t.stats = stats;
  t.params = params;
  parallel_for(tau_grid.size(), [&](size_t i) {
    try {
      auto [v, e] = memory_kernel_d(tau_grid[i], params, stats, tol, tau_min);
      t.values[i] = v;
      t.err_estimates[i] = e;
    } catch (const convergence_error& ce) {
      throw convergence_error(
          "kernel_table: non-convergence at tau = " + std::to_string(tau_grid[i]),
          ce.partial);
    }
  });
  return t;
}

std::vector<double> markov_limit_probe(double tau,
                                       const std::vector<double>& chi_sequence,
                                       const ReducedParams& params,
                                       FieldStatistics stats, double tol,
                                       double tau_min) {
  for (size_t i = 0; i + 1 < chi_sequence.size(); ++i)
    if (!(chi_sequence[i] > chi_sequence[i + 1]))
      throw std::domain_error("markov_limit_probe: chi sequence must be strictly decreasing");
  std::vector<double> out;
  out.reserve(chi_sequence.size());
  for (double chi : chi_sequence) {
    ReducedParams p = params;
    p.chi = chi;
    p.mu0 = mu0_value(p.gamma_omegaI, p.chi, p.beta_omegaI);
    out.push_back(memory_kernel_d(tau, p, stats, tol, tau_min).first);
  }
  return out;
}

}  // namespace jrr
