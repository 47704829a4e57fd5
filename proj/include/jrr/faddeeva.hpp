#pragma once

#include <complex>

namespace jrr {

// Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im z >= 0.
// Weideman rational approximation (coefficients built once at startup)
// switched to the Laplace continued fraction at large |z|.
std::complex<double> faddeeva_w(std::complex<double> z);

}  // namespace jrr
