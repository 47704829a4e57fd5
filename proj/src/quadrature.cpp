#include "jrr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace jrr {

namespace {

// Gauss-Kronrod 7-15 nodes and weights (positive half, QUADPACK dqk15).
constexpr double xgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double wgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double wg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
  double a, b;
  std::complex<double> val;
  double err;
};

Panel gk15(const integrand& f, double a, double b) {
  // node coordinates in extended precision: see the integrand alias note
  const long double c = 0.5L * (static_cast<long double>(a) + b);
  const long double h = 0.5L * (static_cast<long double>(b) - a);
  std::complex<double> k15 = wgk[7] * f(c);
  std::complex<double> g7 = wg[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const std::complex<double> lo = f(c - h * xgk[i]), hi = f(c + h * xgk[i]);
    k15 += wgk[i] * (lo + hi);
    if (i % 2 == 1) g7 += wg[i / 2] * (lo + hi);
  }
  const double hw = static_cast<double>(h);
  return {a, b, k15 * hw, std::abs(k15 - g7) * hw};
}

struct PanelOrder {
  bool operator()(const Panel& p, const Panel& q) const {
    if (p.err != q.err) return p.err > q.err;
    return p.a < q.a;  // deterministic tie-break
  }
};

}  // namespace

QuadResult adaptive_gk(const integrand& f, double a, double b,
                       double tol_abs, double tol_rel, int max_panels,
                       const std::vector<double>& breakpoints) {
  QuadResult res;
  if (!(b > a)) {
    res.converged = true;
    return res;
  }
  std::vector<double> edges{a};
  for (double bp : breakpoints)
    if (bp > a && bp < b) edges.push_back(bp);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::multiset<Panel, PanelOrder> heap;
  std::complex<double> total = 0.0;
  double toterr = 0.0;
  long evals = 0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = gk15(f, edges[i], edges[i + 1]);
    evals += 15;
    total += p.val;
    toterr += p.err;
    heap.insert(p);
  }
  int panels = static_cast<int>(heap.size());
  while (toterr > std::max(tol_abs, tol_rel * std::abs(total)) &&
         panels < max_panels && !heap.empty()) {
    Panel worst = *heap.begin();
    heap.erase(heap.begin());
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted by rounding
      toterr -= worst.err;                   // keep its value, drop its claim
      continue;
    }
    Panel l = gk15(f, worst.a, mid), r = gk15(f, mid, worst.b);
    evals += 30;
    total += l.val + r.val - worst.val;
    toterr += l.err + r.err - worst.err;
    heap.insert(l);
    heap.insert(r);
    ++panels;
  }
  res.value = total;
  res.err = toterr;
  res.n_evals = evals;
  res.converged = toterr <= std::max(tol_abs, tol_rel * std::abs(total));
  return res;
}

QuadResult integrate_semi_infinite(const integrand& f, double envelope_scale,
                                   const std::vector<double>& oscillation_scales,
                                   double tol) {
  const double sigma = envelope_scale;
  double rate = 0.0;
  for (double s : oscillation_scales) rate = std::max(rate, s);
  double width = sigma / 2.0;
  if (rate > 0.0) width = std::min(width, M_PI / rate);

  struct Strip {
    double a, b;
    std::complex<double> val;
    double err;
  };
  std::vector<Strip> strips;

  QuadResult res;
  std::complex<double> total = 0.0;
  std::complex<double> comp = 0.0;  // Kahan compensation for the strip sum
  const auto kadd = [&](std::complex<double> v) {
    const std::complex<double> y = v - comp;
    const std::complex<double> t = total + y;
    comp = (t - total) - y;
    total = t;
  };
  double toterr = 0.0;
  double mass = 0.0;  // sum of |strip values|: roundoff scale of the total
  long evals = 0;
  double x = 0.0;
  double cmax = 0.0;  // running max of |f| / (envelope * (1 + w^3))
  const double a = 1.0 / (2.0 * sigma * sigma);
  const int max_panels = 200000;
  int panels = 0;
  bool converged = false;
  double tail = 0.0;

  while (panels < max_panels) {
    const double x1 = x + width;
    // resolve the panel to tol/8 of its own size so panel errors cannot pile up
    QuadResult p = adaptive_gk(f, x, x1, 0.0, tol / 8.0, 256);
    evals += p.n_evals;
    kadd(p.value);
    toterr += p.err;
    mass += std::abs(p.value);
    strips.push_back({x, x1, p.value, p.err});
    panels += static_cast<int>(p.n_evals / 15);
    // envelope calibration from three interior probes; a single midpoint can
    // sit exactly on a zero of an oscillation resonant with the panel width
    for (double frac : {0.21132486540518713, 0.5, 0.78867513459481287}) {
      const double xm = x + frac * width;
      const double env = std::exp(-a * xm * xm) * (1.0 + xm * xm * xm);
      if (env > 1e-300) cmax = std::max(cmax, std::abs(f(xm)) / env);
      ++evals;
    }
    x = x1;

    if (x > 3.0 * sigma) {
      // analytic tail bound: cmax * int_x^inf (1 + w^3) e^{-a w^2} dw, with a
      // 2x margin because cmax is a sampled calibration, not a proven bound
      const double e = std::exp(-a * x * x);
      tail = 2.0 * cmax *
             (e / (2.0 * a * x) + (x * x / (2.0 * a) + 1.0 / (2.0 * a * a)) * e);
      if (tail < tol * std::abs(total) || tail < 1e-300) {
        converged = true;
        break;
      }
    }
  }
  if (!converged) {
    res.value = total;
    res.err = toterr + tail;
    res.n_evals = evals;
    res.converged = false;
    throw convergence_error("integrate_semi_infinite: panel budget exhausted", res);
  }

  // Strongly cancelling integrands (oscillation mass orders of magnitude above
  // the result) defeat the per-strip relative rule: each strip is resolved
  // against its own large value and the estimates pile up. Re-resolve the
  // offending strips toward an absolute share of the convergence target. The
  // target is floored by the roundoff of summing `mass` worth of strip values,
  // which no amount of refinement can beat in fixed precision.
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor_abs = 16.0 * eps * mass;
  const double target = std::max(tol * std::abs(total), floor_abs);
  if (toterr > target && !strips.empty()) {
    const double share = 0.5 * target / static_cast<double>(strips.size());
    for (Strip& s : strips) {
      const double want = std::max(share, 32.0 * eps * std::abs(s.val));
      if (s.err <= want) continue;
      QuadResult r = adaptive_gk(f, s.a, s.b, want, 0.0, 512);
      evals += r.n_evals;
      s.val = r.value;
      s.err = r.err;
    }
    total = 0.0;
    comp = 0.0;
    toterr = 0.0;
    mass = 0.0;
    for (const Strip& s : strips) {
      kadd(s.val);
      toterr += s.err;
      mass += std::abs(s.val);
    }
  }
  res.value = total;
  res.err = std::max(toterr + tail, 16.0 * eps * mass);
  res.n_evals = evals;
  res.converged = true;
  return res;
}

QuadResult integrate_pv(const integrand& f, double pole, double half_width,
                        double tol) {
  QuadResult res;
  long evals = 0;

  // symmetric pair subtraction: int_0^h [f(p+s) - f(p-s)]/s ds
  const auto sym = [&](double s) { return (f(pole + s) - f(pole - s)) / s; };
  QuadResult inner = adaptive_gk(sym, 0.0, half_width, 0.0, tol / 4.0, 20000);
  evals += 2 * inner.n_evals;
  std::complex<double> total = inner.value;
  double toterr = inner.err;

  // outside: plain quadrature with the pole factor, panels doubling outward
  for (int dir = -1; dir <= 1; dir += 2) {
    double lo = half_width;
    int quiet = 0;
    for (int k = 0; k < 60 && quiet < 2; ++k) {
      const double hi = lo * 2.0;
      const auto g = [&](double s) {
        const double y = pole + dir * s;
        return f(y) / (dir * s);
      };
      const double floor_abs = tol / 8.0 * std::max(std::abs(total), 1e-30);
      QuadResult p = adaptive_gk(g, lo, hi, floor_abs, tol / 4.0, 4000);
      evals += p.n_evals;
      total += p.value;
      toterr += p.err;
      if (std::abs(p.value) < tol * std::max(1e-300, std::abs(total)))
        ++quiet;
      else
        quiet = 0;
      lo = hi;
    }
  }
  res.value = total;
  res.err = toterr;
  res.n_evals = evals;
  res.converged = true;
  return res;
}

RichardsonResult richardson(const std::vector<std::complex<double>>& values,
                            const std::vector<double>& etas, double order_hint) {
  (void)order_hint;
  const size_t n = values.size();
  if (n < 3 || etas.size() != n)
    throw std::invalid_argument("richardson: need >= 3 values with matching etas");
  for (size_t i = 1; i < n; ++i)
    if (!(etas[i] < etas[i - 1]))
      throw std::invalid_argument("richardson: etas must be strictly decreasing");

  // Neville table evaluated at eta = 0
  std::vector<std::complex<double>> t(values);
  std::complex<double> prev_diag = t[0];
  RichardsonResult out;
  for (size_t k = 1; k < n; ++k) {
    for (size_t i = 0; i + k < n; ++i)
      t[i] = t[i + 1] + (t[i + 1] - t[i]) * etas[i + k] / (etas[i] - etas[i + k]);
    if (k == n - 2) prev_diag = t[0];
  }
  out.limit = t[0];
  out.err = std::abs(t[0] - prev_diag);

  // detected order from first-column residuals against the limit
  double order_acc = 0.0;
  int order_cnt = 0;
  bool monotone = true;
  double prev_res = -1.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = std::abs(values[i] - out.limit);
    if (prev_res >= 0.0) {
      if (r > prev_res) monotone = false;
      if (r > 1e-15 && prev_res > 1e-15) {
        order_acc += std::log(r / prev_res) / std::log(etas[i] / etas[i - 1]);
        ++order_cnt;
      }
    }
    prev_res = r;
  }
  out.detected_order = order_cnt ? order_acc / order_cnt : 0.0;
  out.low_confidence = !monotone;
  return out;
}

}  // namespace jrr
