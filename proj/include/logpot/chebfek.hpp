#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "logpot/setgeom.hpp"

namespace logpot {

struct ChebyshevResult {
  int degree{0};
  // Monic, ascending powers: coefficients[degree] == 1.
  std::vector<double> coefficients;
  std::vector<double> roots;
  double sup_norm{0.0};
  // Final Remez reference (unrestricted) where the error alternates in sign.
  std::vector<double> equioscillation_points;
  bool restricted{false};
  int iterations{0};
  // max |T| over E divided by the levelled reference error at exit.
  double reference_ratio{1.0};
};

// Monic minimax polynomial on E by discrete Remez exchange (64 n grid points
// per interval, extrema polished by golden section). The restricted variant
// keeps every root in E; it starts from the better of the projected
// unrestricted roots and the best Fekete polynomial of an (n+1)-point Fekete
// set, then runs a smoothed projected descent on the roots.
ChebyshevResult chebyshev(const IntervalUnion& set, int n, bool restricted);

struct FeketeSet {
  std::vector<double> points;
  double zeta{0.0};
  // log of q_n = prod_{i != j} |z_i - z_j|.
  double log_q{0.0};
  // Largest |sum_{j != i} 1/(z_i - z_j)| over points not pinned to an end.
  double grad_norm{0.0};
  std::size_t pinned{0};
};

FeketeSet fekete(const IntervalUnion& set, int n);

// zeta_n recomputed from a point set.
double fekete_constant(std::span<const double> points);

// zeta_2 .. zeta_{n_max}.
std::vector<double> transfinite_diameter(const IntervalUnion& set, int n_max);

struct BoundsChain {
  int degree{0};
  double capacity{0.0};
  double chebyshev_root{0.0};    // ||T_n||^{1/n}
  double restricted_root{0.0};   // ||T_n^R||^{1/n}
  double zeta_next{0.0};         // zeta_{n+1}
  bool holds{false};
};

BoundsChain bounds_chain(const IntervalUnion& set, int n, double slack = 1e-6);

// KS distance between the uniform measure on an n-point Fekete set and the
// equilibrium measure, for each n.
std::vector<double> fekete_counting_convergence(const IntervalUnion& set, std::span<const int> n_list);

// Product-form helpers shared with tests and the CLI.
std::vector<double> monic_from_roots(std::span<const double> roots);
double abs_product(std::span<const double> roots, double x);

}  // namespace logpot
