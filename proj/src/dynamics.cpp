#include "jrr/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "jrr/io.hpp"
#include "jrr/parallel.hpp"
#include "jrr/spectrum.hpp"

namespace jrr {

namespace {

const std::complex<double> I(0.0, 1.0);

// forward DFT, sum_k a[k] e^{-2 pi i n k / N}, N a power of two
void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
        const auto u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

void check_T_dt(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("trajectory: T and dt must be positive");
}

}  // namespace

CharRoots al_char_roots(double gamma, double omega0) {
  if (!(gamma > 0.0) || !(omega0 > 0.0))
    throw std::domain_error("al_char_roots: gamma and omega0 must be positive");
  // substituting z = iw turns i gamma z^3 + z^2 - omega0^2 into a real cubic
  // gamma w^3 - w^2 - omega0^2 with exactly one real (runaway) root
  const auto f = [&](double w) {
    return gamma * w * w * w - w * w - omega0 * omega0;
  };
  const auto fp = [&](double w) { return w * (3.0 * gamma * w - 2.0); };
  double w = 1.0 / gamma + gamma * omega0 * omega0;
  for (int it = 0; it < 200; ++it) {
    const double step = f(w) / fp(w);
    w -= step;
    if (std::abs(step) <= 1e-16 * std::abs(w)) break;
  }
  // deflate: gamma w^3 - w^2 - omega0^2 = (w - w_r)(gamma w^2 + b w + c)
  const double b = gamma * w - 1.0;
  const double c = omega0 * omega0 / w;
  const std::complex<double> disc = std::sqrt(std::complex<double>(b * b - 4.0 * gamma * c, 0.0));
  const std::complex<double> wp = (-b + disc) / (2.0 * gamma);
  const std::complex<double> wm = (-b - disc) / (2.0 * gamma);

  CharRoots cr;
  cr.roots = {I * wp, I * wm, I * w};
  if (cr.roots[0].real() < cr.roots[1].real()) std::swap(cr.roots[0], cr.roots[1]);
  return cr;
}

Trajectory al_trajectory(double gamma, double omega0, double r0, double v0,
                         double T, double dt, bool suppress_runaway) {
  check_T_dt(T, dt);
  const CharRoots cr = al_char_roots(gamma, omega0);
  const std::complex<double> z1 = cr.roots[0], z2 = cr.roots[1], zr = cr.roots[2];
  if (!suppress_runaway && zr.imag() * T > 709.0)
    throw runaway_overflow(
        "al_trajectory: runaway mode exp(t/" + format_g17(1.0 / zr.imag()) +
        ") overflows before T = " + format_g17(T) +
        "; suppress the runaway or shorten T");

  Eigen::Vector3cd coef;
  if (suppress_runaway) {
    Eigen::Matrix2cd A;
    A << 1.0, 1.0, -I * z1, -I * z2;
    const Eigen::Vector2cd c2 =
        A.colPivHouseholderQr().solve(Eigen::Vector2cd(r0, v0));
    coef << c2(0), c2(1), 0.0;
  } else {
    // a(0) = 0 closes the system; the runaway mode stays weakly excited
    Eigen::Matrix3cd A;
    A << 1.0, 1.0, 1.0,
        -I * z1, -I * z2, -I * zr,
        -z1 * z1, -z2 * z2, -zr * zr;
    coef = A.colPivHouseholderQr().solve(Eigen::Vector3cd(r0, v0, 0.0));
  }

  Trajectory tr;
  tr.model = TrajectoryModel::CLASSICAL_AL;
  tr.time_unit = "1/omega0";
  const std::size_t n = static_cast<std::size_t>(std::llround(T / dt));
  tr.ts.reserve(n + 1);
  tr.rs.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    std::complex<double> r = 0.0;
    for (int j = 0; j < 3; ++j) r += coef(j) * std::exp(-I * cr.roots[j] * t);
    tr.ts.push_back(t);
    tr.rs.push_back(r.real());
  }
  tr.meta["gamma"] = format_g17(gamma);
  tr.meta["omega0"] = format_g17(omega0);
  tr.meta["r0"] = format_g17(r0);
  tr.meta["v0"] = format_g17(v0);
  tr.meta["third_condition"] =
      suppress_runaway ? "runaway mode zeroed" : "a(0) = 0";
  return tr;
}

namespace {

std::vector<std::complex<double>> response_from_mu(
    const std::vector<double>& grid, double w0,
    const std::vector<std::complex<double>>& mu_vals) {
  std::vector<std::complex<double>> alpha(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid[i];
    const std::complex<double> den = w0 * w0 - w * w - I * w * mu_vals[i];
    if (std::abs(den) < 1e-12)
      throw near_resonance_error("amended_response: |denominator| < 1e-12 at omega = " +
                                 format_g17(w));
    alpha[i] = 1.0 / den;
  }
  return alpha;
}

}  // namespace

std::vector<std::complex<double>> amended_response(
    const std::vector<double>& omega_grid, const ReducedParams& params,
    FieldStatistics stats) {
  for (double w : omega_grid)
    if (w == 0.0)
      throw std::invalid_argument("amended_response: grid must exclude 0");
  std::vector<std::complex<double>> mu_vals(omega_grid.size());
  parallel_for(omega_grid.size(), [&](std::size_t i) {
    mu_vals[i] = mu_boundary(omega_grid[i], params, stats, 1e-7).mu();
  });
  return response_from_mu(omega_grid, params.omega0_over_omegaI, mu_vals);
}

std::vector<std::complex<double>> amended_response(
    const std::vector<double>& omega_grid, const ReducedParams& params,
    const std::function<std::complex<double>(double)>& mu_of_omega) {
  for (double w : omega_grid)
    if (w == 0.0)
      throw std::invalid_argument("amended_response: grid must exclude 0");
  std::vector<std::complex<double>> mu_vals(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i)
    mu_vals[i] = mu_of_omega(omega_grid[i]);
  return response_from_mu(omega_grid, params.omega0_over_omegaI, mu_vals);
}

Trajectory amended_trajectory(
    double r0, double v0, double T, std::size_t n_samples,
    const ReducedParams& params, FieldStatistics,
    const std::function<std::complex<double>(std::complex<double>)>& mu_of_z) {
  if (n_samples < 8 || (n_samples & (n_samples - 1)) != 0)
    throw std::invalid_argument(
        "amended_trajectory: n_samples must be a power of two, at least 8");
  if (!(T > 0.0))
    throw std::invalid_argument("amended_trajectory: T must be positive");

  // synthesize on a 2x window so the wrap-around of the t = 0 transient
  // lands in the discarded half, not at the end of the requested interval
  const std::size_t N = n_samples, Nsyn = 2 * N, M = Nsyn / 2 + 1;
  const double Tsyn = 2.0 * T, eta = 12.0 / Tsyn, dw = 2.0 * M_PI / Tsyn;
  const double w0 = params.omega0_over_omegaI;

  std::vector<std::complex<double>> zs(M), dalpha(M);
  for (std::size_t k = 0; k < M; ++k)
    zs[k] = std::complex<double>(static_cast<double>(k) * dw, eta);
  parallel_for(M, [&](std::size_t k) {
    const std::complex<double> z = zs[k];
    const std::complex<double> den = w0 * w0 - z * z - I * z * mu_of_z(z);
    if (std::abs(den) < 1e-12)
      throw near_resonance_error(
          "amended_trajectory: |denominator| < 1e-12 at z = " +
          format_g17(z.real()) + " + " + format_g17(z.imag()) + "i");
    dalpha[k] = 1.0 / den - 1.0 / (w0 * w0 - z * z);
  });

  double max_im_residual = 0.0;
  // one synthesis: correction series on the damped line, undamped pointwise,
  // plus the exact free response; also the correction's velocity at t = 0
  const auto synth = [&](double r0b, double v0b, std::vector<double>& rout,
                         double& v_at_0, std::vector<std::complex<double>>& dh_out) {
    std::vector<std::complex<double>> dh(M);
    for (std::size_t k = 0; k < M; ++k)
      dh[k] = (v0b - I * zs[k] * r0b) * dalpha[k];
    dh[M - 1] = dh[M - 1].real();  // Nyquist bin must be real

    std::vector<std::complex<double>> arr(Nsyn);
    for (std::size_t k = 0; k < M; ++k) arr[k] = dh[k];
    for (std::size_t k = 1; k < Nsyn / 2; ++k) arr[Nsyn - k] = std::conj(dh[k]);
    fft_inplace(arr);

    std::complex<double> vsum = -I * zs[0] * dh[0];
    vsum += (-I * zs[M - 1] * dh[M - 1]).real();
    for (std::size_t k = 1; k + 1 < M; ++k) vsum += 2.0 * (-I * zs[k] * dh[k]).real();
    v_at_0 = (dw / (2.0 * M_PI)) * vsum.real() + v0b;

    rout.resize(N);
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      const double t = static_cast<double>(n) * (Tsyn / static_cast<double>(Nsyn));
      const double corr = (dw / (2.0 * M_PI)) * arr[n].real() * std::exp(eta * t);
      rout[n] = corr + r0b * std::cos(w0 * t) + (v0b / w0) * std::sin(w0 * t);
      max_re = std::max(max_re, std::abs(arr[n].real()));
      max_im = std::max(max_im, std::abs(arr[n].imag()));
    }
    max_im_residual = std::max(max_im_residual, max_im / std::max(max_re, 1e-300));
    dh_out = std::move(dh);
  };

  std::vector<double> b1, b2;
  std::vector<std::complex<double>> dh1, dh2;
  double d1 = 0.0, d2 = 0.0;
  synth(1.0, 0.0, b1, d1, dh1);
  synth(0.0, 1.0, b2, d2, dh2);

  Eigen::Matrix2d Mic;
  Mic << b1[0], b2[0], d1, d2;
  const Eigen::Vector2d ab = Mic.colPivHouseholderQr().solve(Eigen::Vector2d(r0, v0));

  // aliasing check: spectral energy in the top decade of the grid
  double e_total = 0.0, e_top = 0.0;
  const double wmax = static_cast<double>(Nsyn / 2) * dw;
  for (std::size_t k = 0; k < M; ++k) {
    const double e = std::norm(ab(0) * dh1[k] + ab(1) * dh2[k]);
    e_total += e;
    if (static_cast<double>(k) * dw >= wmax / 10.0) e_top += e;
  }
  if (e_total > 0.0 && e_top > 1e-6 * e_total)
    throw bandwidth_error(
        "amended_trajectory: top-decade spectral energy fraction " +
        format_g17(e_top / e_total) + " exceeds 1e-6; increase n_samples");

  Trajectory tr;
  tr.model = TrajectoryModel::AMENDED_SPECTRAL;
  tr.time_unit = "1/omegaI";
  tr.ts.resize(N);
  tr.rs.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    tr.ts[n] = static_cast<double>(n) * (T / static_cast<double>(N));
    tr.rs[n] = ab(0) * b1[n] + ab(1) * b2[n];
  }
  tr.meta["chi"] = format_g17(params.chi);
  tr.meta["beta_omegaI"] = format_beta(params.beta_omegaI);
  tr.meta["gamma_omegaI"] = format_g17(params.gamma_omegaI);
  tr.meta["omega0_over_omegaI"] = format_g17(w0);
  tr.meta["r0"] = format_g17(r0);
  tr.meta["v0"] = format_g17(v0);
  tr.meta["n_samples"] = std::to_string(N);
  tr.meta["window"] = "2x padded, eta = " + format_g17(eta);
  tr.meta["max_im_residual"] = format_g17(max_im_residual);
  return tr;
}

Trajectory amended_trajectory(double r0, double v0, double T,
                              std::size_t n_samples, const ReducedParams& params,
                              FieldStatistics stats) {
  require_valid_stats(stats, params.beta_omegaI);
  Trajectory tr = amended_trajectory(
      r0, v0, T, n_samples, params, stats,
      [&](std::complex<double> z) { return mu_fast(z, params, stats, 1e-9); });
  tr.meta["stats"] = stats_name(stats);
  return tr;
}

Trajectory volterra_evolve(double r0, double v0, double T, double dt,
                           double tau_min, const ReducedParams& params,
                           FieldStatistics stats, const KernelTable& table) {
  check_T_dt(T, dt);
  if (!(dt > tau_min))
    throw std::invalid_argument(
        "volterra_evolve: dt must exceed tau_min, the dropped singular core");

  const std::size_t n = static_cast<std::size_t>(std::llround(T / dt));
  // kernel at the step lattice j*dt
  std::vector<double> D(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const double tau = static_cast<double>(j) * dt;
    const auto it = std::lower_bound(table.taus.begin(), table.taus.end(),
                                     tau - 1e-9 * std::max(1.0, tau));
    if (it == table.taus.end() || std::abs(*it - tau) > 1e-9 * std::max(1.0, tau))
      throw std::invalid_argument("volterra_evolve: kernel table missing tau = " +
                                  format_g17(tau));
    D[j] = table.values[static_cast<std::size_t>(it - table.taus.begin())];
  }

  const double w02 = params.omega0_over_omegaI * params.omega0_over_omegaI;
  const double g2 = 2.0 * params.gamma_omegaI;
  std::vector<double> r(n + 1), v(n + 1);
  r[0] = r0;
  v[0] = v0;
  // memory term M_i = dt [ sum_{j=1}^{i-1} D_j r_{i-j} + D_i r_0 / 2 ]
  const auto mem = [&](std::size_t i) {
    if (i == 0) return 0.0;
    double s = 0.0;
    for (std::size_t j = 1; j < i; ++j) s += D[j] * r[i - j];
    s += 0.5 * D[i] * r[0];
    return dt * s;
  };
  double a_i = -w02 * r[0] + g2 * mem(0);
  for (std::size_t i = 0; i < n; ++i) {
    r[i + 1] = r[i] + dt * v[i] + 0.5 * dt * dt * a_i;
    const double a_next = -w02 * r[i + 1] + g2 * mem(i + 1);
    v[i + 1] = v[i] + 0.5 * dt * (a_i + a_next);
    a_i = a_next;
  }

  Trajectory tr;
  tr.model = TrajectoryModel::AMENDED_VOLTERRA;
  tr.time_unit = "1/omegaI";
  tr.ts.resize(n + 1);
  tr.rs = std::move(r);
  for (std::size_t k = 0; k <= n; ++k) tr.ts[k] = static_cast<double>(k) * dt;
  tr.meta["chi"] = format_g17(params.chi);
  tr.meta["beta_omegaI"] = format_beta(params.beta_omegaI);
  tr.meta["gamma_omegaI"] = format_g17(params.gamma_omegaI);
  tr.meta["omega0_over_omegaI"] = format_g17(params.omega0_over_omegaI);
  tr.meta["stats"] = stats_name(stats);
  tr.meta["r0"] = format_g17(r0);
  tr.meta["v0"] = format_g17(v0);
  tr.meta["dt"] = format_g17(dt);
  tr.meta["role"] = "diagnostic";
  tr.meta["dropped_kernel_interval"] = "(0, " + format_g17(tau_min) + "]";
  return tr;
}

Trajectory volterra_evolve(double r0, double v0, double T, double dt,
                           double tau_min, const ReducedParams& params,
                           FieldStatistics stats) {
  check_T_dt(T, dt);
  if (!(dt > tau_min))
    throw std::invalid_argument(
        "volterra_evolve: dt must exceed tau_min, the dropped singular core");
  const std::size_t n = static_cast<std::size_t>(std::llround(T / dt));
  std::vector<double> taus(n);
  for (std::size_t j = 1; j <= n; ++j) taus[j - 1] = static_cast<double>(j) * dt;
  const KernelTable table = kernel_table(taus, params, stats, 1e-9, tau_min);
  return volterra_evolve(r0, v0, T, dt, tau_min, params, stats, table);
}

}  // namespace jrr
