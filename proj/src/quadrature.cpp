#include "logpot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace logpot {

QuadratureRule gauss_legendre(std::size_t n) {
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_chebyshev(std::size_t n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, std::numbers::pi / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    // Ascending order: theta runs from pi down to 0.
    const double theta = std::numbers::pi * (static_cast<double>(n - k) - 0.5) / static_cast<double>(n);
    rule.nodes[k] = std::cos(theta);
  }
  return rule;
}

QuadratureRule gauss_jacobi_half(std::size_t n, bool left) {
  const QuadratureRule even = gauss_legendre(2 * n);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = even.nodes[n + k];  // positive half
    // 1 + x = 2 s^2 computed without cancellation.
    const double x = 2.0 * s * s - 1.0;
    rule.nodes[k] = x;
    rule.weights[k] = 2.0 * std::numbers::sqrt2 * even.weights[n + k];
  }
  if (!left) {
    for (auto& x : rule.nodes) x = -x;
    std::reverse(rule.nodes.begin(), rule.nodes.end());
    std::reverse(rule.weights.begin(), rule.weights.end());
  }
  return rule;
}

}  // namespace logpot
