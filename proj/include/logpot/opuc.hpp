#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace logpot {

using cplx = std::complex<double>;

// Verblunsky coefficients alpha_0, alpha_1, ... with |alpha_n| < 1.
struct VerblunskyParams {
  std::vector<cplx> alpha;

  // Validates |alpha_n| < 1 (BadInput otherwise).
  static VerblunskyParams from(std::vector<cplx> alpha);

  std::size_t size() const { return alpha.size(); }
  // rho_j = sqrt(1 - |alpha_j|^2), computed without cancellation near |alpha| = 1.
  double rho(std::size_t j) const;
  // log rho_j = log1p(-|alpha_j|^2) / 2.
  double log_rho(std::size_t j) const;
};

// alpha uniform on the disk |z| <= max_abs.
VerblunskyParams random_verblunsky(std::size_t n, double max_abs, std::uint64_t seed);

// (Phi_n(z), Phi_n^*(z)) by the joint forward Szego recursion.
std::pair<cplx, cplx> szego_eval(const VerblunskyParams& v, std::size_t n, cplx z);

// Coefficients of the monic Phi_n, constant term first.
std::vector<cplx> opuc_coefficients(const VerblunskyParams& v, std::size_t n);

// (rho_0 ... rho_{n-1})^{1/n}.
double verblunsky_norm_product(const VerblunskyParams& v, std::size_t n);

// The n zeros of Phi_n (n <= 128) by Aberth iteration with Phi_n and Phi_n'
// evaluated through the Szego recursion, all checked to lie in
// the open unit disk. Zeros of random coefficients can sit closer to the
// circle than double resolves; a converged zero that rounds onto or past the
// circle is pulled back just inside it. Sorted by argument, then modulus.
std::vector<cplx> opuc_zeros(const VerblunskyParams& v, std::size_t n);

// Poisson balayage of the uniform measure on `points` onto the circle,
// sampled at theta_k = 2 pi k / grid. `density` is F with respect to
// d theta / 2 pi.
struct Balayage {
  std::vector<double> theta;
  std::vector<double> density;
};
Balayage balayage(std::span<const cplx> points, std::size_t grid);

// Smallest power-of-two grid (at least min_grid) on which the trapezoid rule
// aliasing error max |z|^(grid - kmax) of the moments up to kmax is below tol.
std::size_t balayage_grid_for(std::span<const cplx> points, int kmax, double tol,
                              std::size_t min_grid = 4096);

// int e^{ik theta} F d theta / 2 pi for k = 0..kmax by the trapezoid rule.
std::vector<cplx> balayage_moments(const Balayage& b, int kmax);
// (1/N) sum z_j^k for k = 0..kmax.
std::vector<cplx> point_moments(std::span<const cplx> points, int kmax);

struct CnClassReport {
  double sup_alpha{0.0};
  double l_of_a{0.0};                   // -log(1 - A) / (2 A), 1/2 at A = 0
  std::size_t pointwise_violations{0};  // j with -log rho_j > L(A) |alpha_j|^2
  std::size_t chain_violations{0};      // n with a failing link of the averaged chain
  std::vector<double> product_root;     // (rho_0 ... rho_{n-1})^{1/n}, n = 1..N
};

// Checks -log rho_j <= L(A) |alpha_j|^2 and the averaged chain
// (1/n) sum -log rho_j <= L(A) (1/n) sum |alpha_j|^2 <= L(A) (1/n) sum |alpha_j|.
// Throws NotApplicable when A = sup |alpha| >= 1.
CnClassReport cn_class_check(const VerblunskyParams& v);

// Capacity of a closed arc of the unit circle of the given angular length.
// Only the full circle (capacity 1) is supported.
double circle_arc_capacity(double arc_length);

}  // namespace logpot
