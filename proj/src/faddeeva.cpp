#include "jrr/faddeeva.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace jrr {

namespace {

constexpr int WN = 64;  // Weideman approximation order

struct WeidemanTable {
  double L;
  std::array<double, WN> a;  // polynomial coefficients, highest degree first

  WeidemanTable() {
    const int M = 2 * WN, M2 = 4 * WN;
    L = std::sqrt(WN / std::sqrt(2.0));
    // sample f(t) = exp(-t^2) (L^2 + t^2) at t = L tan(theta/2),
    // theta_k = k pi / M for k = -M+1 .. M-1, with one zero prepended
    std::vector<double> f(M2, 0.0);
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double theta = k * M_PI / M;
      const double t = L * std::tan(0.5 * theta);
      f[k + M] = std::exp(-t * t) * (L * L + t * t);
    }
    // fftshift then real DFT; keep harmonics 1..WN, highest degree first
    std::vector<double> g(M2);
    for (int j = 0; j < M2; ++j) g[j] = f[(j + M) % M2];
    for (int m = 1; m <= WN; ++m) {
      double acc = 0.0;
      for (int j = 0; j < M2; ++j)
        acc += g[j] * std::cos(2.0 * M_PI * j * m / M2);
      a[WN - m] = acc / M2;
    }
  }
};

const WeidemanTable& table() {
  static const WeidemanTable t;
  return t;
}

const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);

std::complex<double> w_continued_fraction(std::complex<double> z) {
  // Laplace continued fraction, downward evaluation; good for |z| >= 8
  std::complex<double> r = 0.0;
  for (int k = 12; k >= 1; --k) r = (0.5 * k) / (z - r);
  return std::complex<double>(0.0, inv_sqrt_pi) / (z - r);
}

}  // namespace

std::complex<double> faddeeva_w(std::complex<double> z) {
  if (std::norm(z) >= 64.0) return w_continued_fraction(z);
  const WeidemanTable& t = table();
  const std::complex<double> iz(-z.imag(), z.real());
  const std::complex<double> d = t.L - iz;
  const std::complex<double> Z = (t.L + iz) / d;
  std::complex<double> p = 0.0;
  for (double c : t.a) p = p * Z + c;
  return 2.0 * p / (d * d) + inv_sqrt_pi / d;
}

}  // namespace jrr
