#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "jrr/quadrature.hpp"

using namespace jrr;

namespace {

// Dawson function F(x) = e^{-x^2} int_0^x e^{t^2} dt by its power series
// F(x) = sum_n (-2)^n x^{2n+1} / (1*3*...*(2n+1)); plenty for |x| ~ 1.
double dawson_series(double x) {
  double term = x, sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -2.0 * x * x / (2.0 * n + 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("semi-infinite: moment of a Gaussian") {
  // int_0^inf w^3 e^{-w^2} dw = 1/2
  const auto f = [](double w) -> std::complex<double> {
    return w * w * w * std::exp(-w * w);
  };
  QuadResult q = integrate_semi_infinite(f, 1.0 / std::sqrt(2.0), {}, 1e-10);
  CHECK(q.converged);
  CHECK(std::abs(q.value.real() - 0.5) <= q.err);
  CHECK(q.value.real() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(q.value.imag()) < 1e-15);
}

TEST_CASE("semi-infinite: oscillatory Gaussian") {
  // int_0^inf e^{-w^2} cos(10 w) dw = (sqrt(pi)/2) e^{-25}
  const auto f = [](double w) -> std::complex<double> {
    return std::exp(-w * w) * std::cos(10.0 * w);
  };
  const double exact = 0.5 * std::sqrt(M_PI) * std::exp(-25.0);
  QuadResult q = integrate_semi_infinite(f, 1.0 / std::sqrt(2.0), {10.0}, 1e-10);
  CHECK(q.converged);
  // the integral is ~1e-11 after near-total cancellation; absolute scale only
  CHECK(std::abs(q.value.real() - exact) <= q.err + 1e-15);
  CHECK(std::abs(q.value.real() - exact) < 1e-13);
}

TEST_CASE("semi-infinite: chirped integrand") {
  // int_0^inf w^3 e^{-w^2} sin(w^2) dw = 1/4
  const auto f = [](double w) -> std::complex<double> {
    return w * w * w * std::exp(-w * w) * std::sin(w * w);
  };
  QuadResult q =
      integrate_semi_infinite(f, 1.0 / std::sqrt(2.0), {std::sqrt(2.0)}, 1e-10);
  CHECK(q.converged);
  CHECK(std::abs(q.value.real() - 0.25) <= q.err);
  CHECK(q.value.real() == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("semi-infinite: err tracks tol") {
  const auto f = [](double w) -> std::complex<double> {
    return w * w * w * std::exp(-w * w);
  };
  double prev_err = -1.0;
  for (double tol : {1e-6, 1e-7, 1e-8, 1e-9}) {
    QuadResult q = integrate_semi_infinite(f, 1.0 / std::sqrt(2.0), {}, tol);
    if (prev_err >= 0.0) CHECK(q.err <= 2.0 * prev_err);
    prev_err = q.err;
  }
}

TEST_CASE("semi-infinite: deterministic node placement") {
  const auto f = [](double w) -> std::complex<double> {
    return w * w * w * std::exp(-w * w) * std::sin(w * w);
  };
  QuadResult a = integrate_semi_infinite(f, 1.0 / std::sqrt(2.0), {1.4}, 1e-9);
  QuadResult b = integrate_semi_infinite(f, 1.0 / std::sqrt(2.0), {1.4}, 1e-9);
  CHECK(a.n_evals == b.n_evals);
  CHECK(a.value.real() == b.value.real());
  CHECK(a.err == b.err);
}

TEST_CASE("semi-infinite: budget exhaustion carries the partial result") {
  // an absurd oscillation scale forces micro-panels; the budget runs out
  // long before the envelope tail can clear
  const auto f = [](double w) -> std::complex<double> { return std::exp(-w * w); };
  try {
    integrate_semi_infinite(f, 1.0 / std::sqrt(2.0), {1e6}, 1e-10);
    FAIL("expected convergence_error");
  } catch (const convergence_error& e) {
    CHECK(!e.partial.converged);
    CHECK(e.partial.n_evals > 0);
    CHECK(e.partial.value.real() > 0.0);
    CHECK(e.partial.value.real() < std::sqrt(M_PI) / 2.0);
  }
}

TEST_CASE("pv: odd integrand vanishes") {
  const auto f = [](double y) -> std::complex<double> { return std::exp(-y * y); };
  QuadResult q = integrate_pv(f, 0.0, 1.0, 1e-10);
  CHECK(std::abs(q.value.real()) <= q.err + 1e-14);
  CHECK(std::abs(q.value.real()) < 1e-12);
}

TEST_CASE("pv: shifted Gaussian against the Dawson closed form") {
  // P int e^{-(y-1)^2}/y dy = 2 sqrt(pi) F(1), F the Dawson function
  const auto f = [](double y) -> std::complex<double> {
    return std::exp(-(y - 1.0) * (y - 1.0));
  };
  const double exact = 2.0 * std::sqrt(M_PI) * dawson_series(1.0);
  CHECK(exact == doctest::Approx(1.9074421882417552).epsilon(1e-14));
  QuadResult q = integrate_pv(f, 0.0, 1.0, 1e-10);
  CHECK(std::abs(q.value.real() - exact) <= q.err + 1e-12);
  CHECK(q.value.real() == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("pv: pole far outside the support is plain quadrature") {
  const auto f = [](double y) -> std::complex<double> {
    return std::exp(-(y - 10.0) * (y - 10.0));
  };
  QuadResult pv = integrate_pv(f, 0.0, 1.0, 1e-10);
  const auto g = [&](double y) -> std::complex<double> { return f(y).real() / y; };
  QuadResult plain = adaptive_gk(g, 2.0, 18.0, 0.0, 1e-12);
  CHECK(std::abs(pv.value.real() - plain.value.real()) <=
        pv.err + plain.err + 1e-13);
}

TEST_CASE("richardson: linear data") {
  std::vector<std::complex<double>> vals{1.1, 1.05, 1.025};
  RichardsonResult r = richardson(vals, {0.1, 0.05, 0.025});
  CHECK(std::abs(r.limit.real() - 1.0) < 1e-12);
  CHECK(r.err < 1e-12);
  CHECK(!r.low_confidence);
}

TEST_CASE("richardson: quadratic data detects order 2") {
  std::vector<double> etas{0.1, 0.05, 0.025, 0.0125};
  std::vector<std::complex<double>> vals;
  for (double e : etas) vals.emplace_back(1.0 + e * e, 0.0);
  RichardsonResult r = richardson(vals, etas);
  CHECK(std::abs(r.limit.real() - 1.0) < 1e-12);
  CHECK(r.detected_order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("richardson: non-monotone residuals raise the flag") {
  std::vector<std::complex<double>> vals{1.01, 1.10, 1.002};
  RichardsonResult r = richardson(vals, {0.1, 0.05, 0.025});
  CHECK(r.low_confidence);
}

TEST_CASE("richardson: input validation") {
  std::vector<std::complex<double>> two{1.0, 2.0};
  CHECK_THROWS_AS(richardson(two, {0.1, 0.05}), std::invalid_argument);
  std::vector<std::complex<double>> three{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(richardson(three, {0.1, 0.2, 0.05}), std::invalid_argument);
}

TEST_CASE("adaptive_gk: breakpoints and determinism") {
  const auto f = [](double x) -> std::complex<double> {
    return std::abs(x - 0.3) < 0.1 ? 1.0 : 0.0;
  };
  QuadResult a = adaptive_gk(f, 0.0, 1.0, 0.0, 1e-8, 20000, {0.2, 0.4});
  QuadResult b = adaptive_gk(f, 0.0, 1.0, 0.0, 1e-8, 20000, {0.2, 0.4});
  CHECK(a.value.real() == b.value.real());
  CHECK(a.n_evals == b.n_evals);
  CHECK(a.value.real() == doctest::Approx(0.2).epsilon(1e-6));
}
