#include "jrr/flo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "jrr/parallel.hpp"
#include "jrr/quadrature.hpp"
#include "jrr/spectrum.hpp"
#include "json.hpp"

namespace jrr {

namespace {

constexpr double mu_tol_re = 1e-7;    // boundary Re integral
constexpr double mu_tol_full = 1e-7;  // full boundary sample
constexpr double mu_tol_uhp = 1e-11;  // stencil evaluations, mu_fast

// defaults used by scan for criterion (i)
std::vector<std::complex<double>> default_uhp_grid() {
  std::vector<std::complex<double>> g;
  for (double x : {-3.0, -1.5, 0.0, 1.5, 3.0})
    for (double y : {0.5, 1.25, 3.0}) g.emplace_back(x, y);
  return g;
}

std::vector<double> default_h_seq() { return {0.03, 0.01, 0.003}; }

struct PosPoint {
  double re = 0.0, err = 0.0;
  bool ok = false;
};

std::vector<PosPoint> positivity_points(const ReducedParams& params,
                                        FieldStatistics stats,
                                        const std::vector<double>& omegas) {
  std::vector<PosPoint> pts(omegas.size());
  parallel_for(omegas.size(), [&](std::size_t i) {
    try {
      auto [re, err] = re_mu_boundary(omegas[i], params, stats, mu_tol_re);
      pts[i] = {re, err, true};
    } catch (const convergence_error&) {
      pts[i].ok = false;
    }
  });
  return pts;
}

CriterionII positivity_record(const std::vector<double>& omegas,
                              const std::vector<PosPoint>& pts, double tol) {
  CriterionII rec;
  rec.tol = tol;
  rec.min_re_mu = std::numeric_limits<double>::infinity();
  bool any = false;
  bool all_above = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].ok) {
      rec.flagged_omegas.push_back(omegas[i]);
      continue;
    }
    any = true;
    if (pts[i].re < rec.min_re_mu) {
      rec.min_re_mu = pts[i].re;
      rec.argmin_omega = omegas[i];
    }
    if (pts[i].re < -(pts[i].err + tol)) all_above = false;
  }
  rec.pass = any && all_above;
  return rec;
}

void validate_omega_grid(const std::vector<double>& omega_grid, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("positivity: tol must be > 0");
  for (double w : omega_grid)
    if (w == 0.0)
      throw std::invalid_argument("positivity: omega_grid must exclude 0");
}

}  // namespace

CriterionII check_positivity(const ReducedParams& params, FieldStatistics stats,
                             const std::vector<double>& omega_grid, double tol) {
  validate_omega_grid(omega_grid, tol);
  return positivity_record(omega_grid, positivity_points(params, stats, omega_grid),
                           tol);
}

CriterionIII check_symmetry(const std::function<SpectrumSample(double)>& mu_at,
                            const std::vector<double>& omega_grid, double tol) {
  std::vector<double> grid = omega_grid;
  std::sort(grid.begin(), grid.end());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == 0.0)
      throw std::invalid_argument("check_symmetry: grid must exclude 0");
    const double mirror = -grid[grid.size() - 1 - i];
    if (std::abs(grid[i] - mirror) > 1e-12 * std::max(1.0, std::abs(grid[i])))
      throw std::invalid_argument("check_symmetry: grid must be symmetric about 0");
  }

  std::vector<SpectrumSample> samples(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { samples[i] = mu_at(grid[i]); });

  CriterionIII rec;
  rec.pass = true;
  for (std::size_t i = 0; i < grid.size() / 2; ++i) {
    const SpectrumSample& neg = samples[i];
    const SpectrumSample& pos = samples[grid.size() - 1 - i];
    const double asym = std::abs(pos.mu() - std::conj(neg.mu()));
    const double combined =
        pos.re_err + pos.im_err + neg.re_err + neg.im_err + tol;
    rec.max_asymmetry = std::max(rec.max_asymmetry, asym);
    if (asym > combined) rec.pass = false;
  }
  return rec;
}

CriterionIII check_symmetry(const ReducedParams& params, FieldStatistics stats,
                            const std::vector<double>& omega_grid, double tol) {
  return check_symmetry(
      [&](double w) { return mu_boundary_fast(w, params, stats, mu_tol_full); },
      omega_grid, tol);
}

namespace {

CriterionI analyticity_record(
    const std::function<std::complex<double>(std::complex<double>)>& f,
    const std::vector<std::complex<double>>& uhp_grid,
    const std::vector<double>& h_sequence, double eval_tol, double scale_floor) {
  if (h_sequence.size() < 2)
    throw std::invalid_argument("check_analyticity: need at least 2 h values");
  for (std::size_t k = 1; k < h_sequence.size(); ++k)
    if (!(h_sequence[k] < h_sequence[k - 1]))
      throw std::invalid_argument("check_analyticity: h_sequence must decrease");
  const double hmax = h_sequence.front();
  for (auto z : uhp_grid)
    if (!(z.imag() >= 2.0 * hmax))
      throw std::invalid_argument("check_analyticity: grid point too close to the real axis");

  const std::size_t nz = uhp_grid.size(), nh = h_sequence.size();
  // stencil values f(z +- h), f(z +- ih) for every (z, h)
  std::vector<std::complex<double>> vals(nz * nh * 4);
  std::vector<bool> ok(nz * nh * 4, true);
  parallel_for(vals.size(), [&](std::size_t idx) {
    const std::size_t iz = idx / (nh * 4);
    const std::size_t ih = (idx / 4) % nh;
    const int corner = static_cast<int>(idx % 4);
    const double h = h_sequence[ih];
    static const std::complex<double> dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    try {
      vals[idx] = f(uhp_grid[iz] + h * dirs[corner]);
    } catch (const convergence_error&) {
      ok[idx] = false;
    }
  });

  CriterionI rec;
  std::ostringstream gs;
  gs << nz << " UHP points; h =";
  for (double h : h_sequence) gs << " " << h;
  rec.grid_spec = gs.str();

  std::vector<double> slopes;
  for (std::size_t iz = 0; iz < nz; ++iz) {
    std::vector<double> usable_log_h, usable_log_r;
    bool flagged = false;
    for (std::size_t ih = 0; ih < nh; ++ih) {
      const std::size_t base = (iz * nh + ih) * 4;
      if (!(ok[base] && ok[base + 1] && ok[base + 2] && ok[base + 3])) {
        flagged = true;
        continue;
      }
      const double h = h_sequence[ih];
      const auto px = vals[base], mx = vals[base + 1];
      const auto py = vals[base + 2], my = vals[base + 3];
      const double re_x = (px.real() - mx.real()) / (2 * h);
      const double im_y = (py.imag() - my.imag()) / (2 * h);
      const double re_y = (py.real() - my.real()) / (2 * h);
      const double im_x = (px.imag() - mx.imag()) / (2 * h);
      const double resid = std::abs(re_x - im_y) + std::abs(re_y + im_x);
      rec.max_cr_residual = std::max(rec.max_cr_residual, resid);

      double scale = 0.0;
      for (auto v : {px, mx, py, my}) scale = std::max(scale, std::abs(v));
      // differencing amplifies the evaluation noise by 1/h
      const double floor = 40.0 * (10.0 * eval_tol * std::max(scale, scale_floor)) / h;
      if (resid > floor) {
        usable_log_h.push_back(std::log(h));
        usable_log_r.push_back(std::log(resid));
      } else {
        ++rec.n_floor_limited;
      }
    }
    if (flagged) {
      std::ostringstream fs;
      fs << "z=(" << uhp_grid[iz].real() << "," << uhp_grid[iz].imag() << ")";
      rec.flagged.push_back(fs.str());
    }
    if (usable_log_h.size() >= 2) {
      // least-squares slope
      const std::size_t n = usable_log_h.size();
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t k = 0; k < n; ++k) {
        sx += usable_log_h[k];
        sy += usable_log_r[k];
        sxx += usable_log_h[k] * usable_log_h[k];
        sxy += usable_log_h[k] * usable_log_r[k];
      }
      slopes.push_back((n * sxy - sx * sy) / (n * sxx - sx * sx));
    }
  }

  if (slopes.empty()) {
    // every stencil already at the quadrature floor: nothing left to resolve
    rec.observed_order = 0.0;
    rec.pass = true;
  } else {
    std::sort(slopes.begin(), slopes.end());
    rec.observed_order = slopes[slopes.size() / 2];
    rec.pass = rec.observed_order >= 1.5 && rec.observed_order <= 2.5;
  }
  return rec;
}

}  // namespace

CriterionI check_analyticity(const ReducedParams& params, FieldStatistics stats,
                             const std::vector<std::complex<double>>& uhp_grid,
                             const std::vector<double>& h_sequence) {
  return analyticity_record(
      [&](std::complex<double> z) { return mu_fast(z, params, stats, mu_tol_uhp); },
      uhp_grid, h_sequence, mu_tol_uhp, params.mu0);
}

CriterionI check_analyticity(
    const std::function<std::complex<double>(std::complex<double>)>& f,
    const std::vector<std::complex<double>>& uhp_grid,
    const std::vector<double>& h_sequence, double eval_tol) {
  return analyticity_record(f, uhp_grid, h_sequence, eval_tol, 0.0);
}

namespace {

struct ContourPoint {
  std::complex<double> z;
  std::complex<double> F;
};

void refine_segment(const std::function<std::complex<double>(std::complex<double>)>& F,
                    const ContourPoint& a, const ContourPoint& b, int depth,
                    double& phase_acc, double& min_abs_f) {
  min_abs_f = std::min({min_abs_f, std::abs(a.F), std::abs(b.F)});
  if (min_abs_f < 1e-6)
    throw contour_degenerate_error("count_uhp_zeros: |F| < 1e-6 on the contour");
  // a midpoint probe guards every acceptance: a turn hiding between the
  // endpoints (two near-axis dips inside one segment can alias a full -2pi
  // to ~0) makes the half increments disagree with the direct one by 2pi
  ContourPoint mid{(a.z + b.z) / 2.0, 0.0};
  mid.F = F(mid.z);
  const double d_left = std::arg(mid.F / a.F);
  const double d_right = std::arg(b.F / mid.F);
  const double d_dir = std::arg(b.F / a.F);
  if (std::abs(d_left) < M_PI / 2 && std::abs(d_right) < M_PI / 2 &&
      std::abs(d_left + d_right - d_dir) < 1e-6) {
    phase_acc += d_dir;
    return;
  }
  if (depth >= 40)
    throw contour_resolution_error(
        "count_uhp_zeros: phase increment >= pi persists after max refinement");
  refine_segment(F, a, mid, depth + 1, phase_acc, min_abs_f);
  refine_segment(F, mid, b, depth + 1, phase_acc, min_abs_f);
}

}  // namespace

int winding_number(const std::function<std::complex<double>(std::complex<double>)>& F,
                   const ContourRect& rect, int n_contour_points) {
  if (!(rect.y_lo > 0.0))
    throw std::invalid_argument("winding_number: rectangle must sit above the real axis");
  if (n_contour_points < 8)
    throw std::invalid_argument("winding_number: need at least 8 contour points");

  // counterclockwise: bottom, right, top, left
  const std::complex<double> c0(-rect.x_half, rect.y_lo), c1(rect.x_half, rect.y_lo),
      c2(rect.x_half, rect.y_hi), c3(-rect.x_half, rect.y_hi);
  const double wx = 2 * rect.x_half, wy = rect.y_hi - rect.y_lo;
  const double perim = 2 * (wx + wy);

  std::vector<std::complex<double>> zs;
  auto edge = [&](std::complex<double> from, std::complex<double> to, double len) {
    const int n = std::max(2, static_cast<int>(std::lround(n_contour_points * len / perim)));
    for (int i = 0; i < n; ++i)
      zs.push_back(from + (to - from) * (static_cast<double>(i) / n));
  };
  edge(c0, c1, wx);
  edge(c1, c2, wy);
  edge(c2, c3, wx);
  edge(c3, c0, wy);
  zs.push_back(c0);  // close the loop

  std::vector<ContourPoint> pts(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) { pts[i] = {zs[i], F(zs[i])}; });

  double phase = 0.0, min_abs_f = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    refine_segment(F, pts[i], pts[i + 1], 0, phase, min_abs_f);

  const double w = phase / (2 * M_PI);
  const long n = std::lround(w);
  if (std::abs(w - static_cast<double>(n)) > 1e-3)
    throw contour_resolution_error("winding_number: accumulated phase is not an integer multiple of 2 pi");
  return static_cast<int>(n);
}

int count_uhp_zeros(const ReducedParams& params, FieldStatistics stats,
                    const ContourRect& rect, int n_contour_points) {
  require_valid_stats(stats, params.beta_omegaI);
  const double w0 = params.omega0_over_omegaI;
  const auto F = [&](std::complex<double> z) {
    return z * z - w0 * w0 + std::complex<double>(0, 1) * z * mu_fast(z, params, stats, 1e-9);
  };
  try {
    return winding_number(F, rect, n_contour_points);
  } catch (const contour_degenerate_error&) {
    ContourRect shrunk{rect.x_half * 0.95, rect.y_lo * 1.05, rect.y_hi * 0.95};
    return winding_number(F, shrunk, n_contour_points);
  }
}

std::vector<FLOReport> scan(const ReducedParams& base,
                            const std::vector<double>& chi_grid,
                            const std::vector<double>& beta_grid,
                            const std::vector<double>& omega_grid,
                            FieldStatistics stats, double tol_scale) {
  if (chi_grid.empty() || beta_grid.empty() || omega_grid.empty())
    throw std::invalid_argument("scan: grids must be nonempty");
  for (double b : beta_grid) require_valid_stats(stats, b);

  std::vector<double> chis = chi_grid, betas = beta_grid, omegas = omega_grid;
  std::sort(chis.begin(), chis.end());
  std::sort(betas.begin(), betas.end());
  std::sort(omegas.begin(), omegas.end());

  std::vector<FLOReport> reports;
  for (double chi : chis) {
    for (double beta : betas) {
      FLOReport rep;
      rep.params = ReducedParams{chi, beta, base.gamma_omegaI,
                                 base.omega0_over_omegaI,
                                 mu0_value(base.gamma_omegaI, chi, beta)};
      rep.stats = stats;
      const double tol = tol_scale * rep.params.mu0;
      validate_omega_grid(omegas, tol);

      const std::vector<PosPoint> pts = positivity_points(rep.params, stats, omegas);
      rep.criterion_ii = positivity_record(omegas, pts, tol);
      rep.criterion_iii = check_symmetry(rep.params, stats, omegas, tol);
      rep.criterion_i = check_analyticity(rep.params, stats, default_uhp_grid(),
                                          default_h_seq());

      // violations: every failing grid point, then bisection around sign
      // changes so a witness is found even when the coarse grid straddles one
      std::map<double, double> re_at;  // omega -> Re mu, converged points only
      for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!pts[i].ok) continue;
        re_at[omegas[i]] = pts[i].re;
        if (pts[i].re < -(pts[i].err + tol))
          rep.violations.push_back({chi, beta, omegas[i], pts[i].re});
      }
      auto prev = re_at.begin();
      for (auto it = std::next(re_at.begin()); it != re_at.end(); ++it, ++prev) {
        if (prev->first < 0.0 && it->first > 0.0) continue;  // straddles omega = 0
        if ((prev->second < -tol) == (it->second < -tol)) continue;
        double lo = prev->first, hi = it->first;
        double re_lo = prev->second, re_hi = it->second;
        for (int k = 0; k < 24; ++k) {
          const double mid = (lo + hi) / 2;
          auto [re, err] = re_mu_boundary(mid, rep.params, stats, mu_tol_re);
          (void)err;
          if ((re < -tol) == (re_lo < -tol)) {
            lo = mid;
            re_lo = re;
          } else {
            hi = mid;
            re_hi = re;
          }
        }
        const double witness = (re_lo < re_hi) ? lo : hi;
        const double re_w = std::min(re_lo, re_hi);
        if (re_w < -tol) rep.violations.push_back({chi, beta, witness, re_w});
      }
      std::sort(rep.violations.begin(), rep.violations.end(),
                [](const Violation& a, const Violation& b) {
                  return std::tie(a.chi, a.beta_omegaI, a.omega) <
                         std::tie(b.chi, b.beta_omegaI, b.omega);
                });
      reports.push_back(std::move(rep));
    }
  }
  return reports;
}

std::string flo_reports_to_json(const std::vector<FLOReport>& reports) {
  using json = nlohmann::ordered_json;
  auto beta_field = [](double b) -> json {
    if (is_infinite(b)) return "INFINITE";
    return b;
  };
  json root;
  root["schema"] = "flo-report-v1";
  root["reports"] = json::array();
  for (const auto& r : reports) {
    json jr;
    jr["params"] = {{"chi", r.params.chi},
                    {"beta_omegaI", beta_field(r.params.beta_omegaI)},
                    {"gamma_omegaI", r.params.gamma_omegaI},
                    {"omega0_over_omegaI", r.params.omega0_over_omegaI},
                    {"mu0", r.params.mu0}};
    jr["stats"] = r.stats == FieldStatistics::QUANTUM ? "quantum" : "classical";
    jr["criterion_i"] = {{"pass", r.criterion_i.pass},
                         {"max_cr_residual", r.criterion_i.max_cr_residual},
                         {"grid_spec", r.criterion_i.grid_spec},
                         {"observed_order", r.criterion_i.observed_order},
                         {"n_floor_limited", r.criterion_i.n_floor_limited},
                         {"flagged", r.criterion_i.flagged}};
    jr["criterion_ii"] = {{"pass", r.criterion_ii.pass},
                          {"min_re_mu", r.criterion_ii.min_re_mu},
                          {"argmin_omega", r.criterion_ii.argmin_omega},
                          {"tol", r.criterion_ii.tol},
                          {"flagged_omegas", r.criterion_ii.flagged_omegas}};
    jr["criterion_iii"] = {{"pass", r.criterion_iii.pass},
                           {"max_asymmetry", r.criterion_iii.max_asymmetry}};
    if (r.uhp_zero_count)
      jr["uhp_zero_count"] = *r.uhp_zero_count;
    else
      jr["uhp_zero_count"] = nullptr;
    jr["violations"] = json::array();
    for (const auto& v : r.violations)
      jr["violations"].push_back({{"chi", v.chi},
                                  {"beta_omegaI", beta_field(v.beta_omegaI)},
                                  {"omega", v.omega},
                                  {"re_mu", v.re_mu}});
    root["reports"].push_back(std::move(jr));
  }
  return root.dump(2) + "\n";
}

}  // namespace jrr
