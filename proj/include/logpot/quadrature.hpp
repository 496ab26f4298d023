#pragma once

#include <cstddef>
#include <vector>

namespace logpot {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
QuadratureRule gauss_legendre(std::size_t n);

// n-point Gauss rule for the weight (1 - x^2)^{-1/2} on [-1, 1], nodes
// ascending; all weights equal pi / n.
QuadratureRule gauss_chebyshev(std::size_t n);

// n-point Gauss rule for (1 + x)^{-1/2} (left = true) or (1 - x)^{-1/2} on
// [-1, 1]. Built from the even 2n-point Legendre rule via x = 2s^2 - 1.
QuadratureRule gauss_jacobi_half(std::size_t n, bool left);

}  // namespace logpot
