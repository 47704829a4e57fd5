#include <cmath>
#include <vector>

#include "doctest.h"
#include "jrr/model.hpp"

using namespace jrr;

TEST_CASE("bose occupancy values") {
  CHECK(bose_occupancy(std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bose_occupancy(INFINITE) == 0.0);
  // small x: n(x) = 1/x - 1/2 + O(x)
  CHECK(bose_occupancy(1e-8) == doctest::Approx(1e8 - 0.5).epsilon(1e-6));
  CHECK_THROWS_AS(bose_occupancy(0.0), std::domain_error);
  CHECK_THROWS_AS(bose_occupancy(-2.0), std::domain_error);
}

TEST_CASE("coth_half values") {
  CHECK(coth_half(INFINITE) == 1.0);
  CHECK(coth_half(1.0) * std::tanh(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(coth_half(1e-6) == doctest::Approx(2e6).epsilon(1e-6));
  CHECK_THROWS_AS(coth_half(0.0), std::domain_error);
  CHECK_THROWS_AS(coth_half(-1.0), std::domain_error);
}

TEST_CASE("bose and coth are strictly decreasing") {
  // strict monotonicity is resolvable until coth saturates at 1 in binary64
  double prev_n = bose_occupancy(1e-3);
  double prev_c = coth_half(1e-3);
  for (double x = 2e-3; x < 30.0; x *= 1.7) {
    const double n = bose_occupancy(x);
    const double c = coth_half(x);
    CHECK(n < prev_n);
    CHECK(c < prev_c);
    CHECK(c > 1.0);
    prev_n = n;
    prev_c = c;
  }
  CHECK(coth_half(100.0) >= 1.0);
  CHECK(coth_half(INFINITE) == 1.0);
}

TEST_CASE("reduce collapses to the dimensionless groups") {
  PhysicalParams p{1.0, 1.0, 1.0, 1.0, INFINITE};
  ReducedParams r = reduce(p);
  CHECK(r.chi == 1.0);
  CHECK(is_infinite(r.beta_omegaI));
  CHECK(r.gamma_omegaI == 1.0);
  CHECK(r.omega0_over_omegaI == 1.0);
  // mu0 = 1/(4 pi^{3/2}) at these inputs
  const double exact = 1.0 / (4.0 * std::pow(M_PI, 1.5));
  CHECK(std::abs(r.mu0 - exact) <= 2e-16 * exact);
}

TEST_CASE("reduce: chi = 1 whenever omegaI = omegaM") {
  PhysicalParams p{0.3, 2.0, 5.0, 5.0, 1.0};
  CHECK(reduce(p).chi == 1.0);
}

TEST_CASE("reduce is scale invariant") {
  // doubling all frequencies while halving beta leaves chi, beta*omegaI and
  // omega0/omegaI fixed; gamma*omegaI (and with it mu0) picks up the factor
  PhysicalParams p{0.2, 1.3, 0.7, 2.1, 3.0};
  PhysicalParams q{0.2, 2.6, 1.4, 4.2, 1.5};
  ReducedParams rp = reduce(p), rq = reduce(q);
  CHECK(rq.chi == doctest::Approx(rp.chi).epsilon(1e-15));
  CHECK(rq.beta_omegaI == doctest::Approx(rp.beta_omegaI).epsilon(1e-15));
  CHECK(rq.omega0_over_omegaI == doctest::Approx(rp.omega0_over_omegaI).epsilon(1e-15));
  CHECK(rq.gamma_omegaI == doctest::Approx(2.0 * rp.gamma_omegaI).epsilon(1e-15));
  CHECK(rq.mu0 == doctest::Approx(2.0 * rp.mu0).epsilon(1e-15));
}

TEST_CASE("mu0 positive over the parameter grid") {
  std::vector<double> betas;
  for (double b = 1e-3; b <= 1e3; b *= 10.0) betas.push_back(b);
  betas.push_back(INFINITE);
  for (double chi = 1e-4; chi <= 1e2; chi *= 10.0)
    for (double b : betas) {
      const double m = mu0_value(1.0, chi, b);
      CHECK(m > 0.0);
      ReducedParams r{chi, b, 1.0, 1.0, m};
      CHECK_NOTHROW(r.validate());
    }
}

TEST_CASE("mu0_value matches its defining expression") {
  const double got = mu0_value(0.7, 2.5, 4.0);
  const double exact =
      0.7 / (4.0 * std::sqrt(M_PI * M_PI * M_PI * 2.5 * coth_half(4.0)));
  CHECK(std::abs(got - exact) <= 1e-16 * exact);
}

TEST_CASE("parameter validation rejects bad inputs") {
  PhysicalParams p{1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK_NOTHROW(p.validate());
  p.gamma = -1.0;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p.gamma = 1.0;
  p.beta = 0.0;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p.beta = INFINITE;
  CHECK_NOTHROW(p.validate());

  ReducedParams r{1.0, 1.0, 1.0, 1.0, mu0_value(1.0, 1.0, 1.0)};
  CHECK_NOTHROW(r.validate());
  r.chi = 0.0;
  CHECK_THROWS_AS(r.validate(), std::domain_error);
}

TEST_CASE("classical statistics need finite temperature") {
  CHECK_NOTHROW(require_valid_stats(FieldStatistics::QUANTUM, INFINITE));
  CHECK_NOTHROW(require_valid_stats(FieldStatistics::CLASSICAL, 2.0));
  CHECK_THROWS_AS(require_valid_stats(FieldStatistics::CLASSICAL, INFINITE),
                  invalid_combination);
}
