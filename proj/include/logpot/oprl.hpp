#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "logpot/potential.hpp"
#include "logpot/setgeom.hpp"

namespace logpot {

// Jacobi parameters a_1.., b_1.. stored zero-based: a[k] is a_{k+1}.
struct JacobiParams {
  std::vector<double> a;
  std::vector<double> b;

  std::size_t size() const { return b.size(); }
  double sup_a() const;
  double sup_b() const;
};

JacobiParams free_jacobi(std::size_t n);
// a_n = 1/2 exactly when n is a perfect square (n = 1 included), b = 0.
JacobiParams sparse_perturbation_jacobi(std::size_t n);
// a = 1/2, b_n = +-1 with fair coin flips from `seed`.
JacobiParams random_sign_jacobi(std::size_t n, std::uint64_t seed);
// a = 1, b_j = 1 for k^2 <= j <= k^2 + k and 0 otherwise.
JacobiParams block_jacobi(std::size_t n);

// Lanczos with full reorthogonalization on diag(nodes), started from the
// square roots of the normalized weights. Runs in extended precision so that
// weights far below the double range can be passed as logarithms.
JacobiParams jacobi_from_measure(const DiscretizedMeasure& mu, std::size_t n);
JacobiParams jacobi_from_log_atoms(std::span<const double> nodes, std::span<const double> log_weights,
                                   std::size_t n);

// p_n(z) by forward recursion, p_{-1} = 0, p_0 = 1.
std::complex<double> orthonormal_eval(const JacobiParams& j, std::size_t n, std::complex<double> z);
// log|p_n(z)| with periodic renormalization.
double log_abs_orthonormal(const JacobiParams& j, std::size_t n, std::complex<double> z);

struct ZeroCountingMeasure {
  std::vector<double> points;
  std::size_t n{0};
};

// Eigenvalues of the top-left n x n block of J.
ZeroCountingMeasure zero_counting(const JacobiParams& j, std::size_t n);

// Zeros of P_n located by Sturm counts on a quantile grid of rho_E: returns an
// upper bound for KS(nu_n, rho_E) that exceeds the exact value by at most
// 1/levels.
double zero_counting_ks(const JacobiParams& j, std::size_t n, const EquilibriumMeasure& eq,
                        std::size_t levels = 1024);

enum class Verdict { Regular, NotRegular, Inconclusive };
const char* verdict_name(Verdict v);

struct RegularityReport {
  std::vector<std::size_t> n_list;
  std::vector<double> gamma_n;
  std::vector<double> ks_distance;
  double capacity{0.0};
  // Intercept of the fit Gamma_n ~ c + d / sqrt(n) over the last decade of n.
  double limit{0.0};
  // limit / capacity - 1.
  double margin{0.0};
  Verdict verdict{Verdict::Inconclusive};
};

// Gamma_n = (a_1 ... a_n)^{1/n} and KS(nu_n, rho_E) at each n in n_list.
// Regular when the extrapolated limit is within 1% of C(E), not regular when it
// is more than 5% below. Throws InconsistentSetClaim when every Gamma_n in
// the last decade and the extrapolated limit exceed C(E) (1 + 1e-3).
RegularityReport regularity_diagnostic(const JacobiParams& j, const IntervalUnion& e,
                                       std::span<const std::size_t> n_list);

struct LowerBoundReport {
  double log_abs_pn{0.0};   // log|p_n(z)|
  double log_bound{0.0};    // log of sqrt((d/D)^2 (1 + (d/D)^2)^{n-1})
  double d{0.0};
  double big_d{0.0};
  bool holds{false};
};

// |p_n(z)|^2 >= (d/D)^2 (1 + (d/D)^2)^{n-1} for z off the hull [c - D, c + D].
LowerBoundReport lower_bound_check(const JacobiParams& j, std::complex<double> z, std::size_t n,
                                   const Interval& hull);

struct StahlTotikScan {
  double bad_length{0.0};
  double spacing{0.0};
  std::size_t grid_points{0};
};

// Lebesgue measure inside E of {x : mu([x - 1/m, x + 1/m]) <= e^{-m eta}},
// sampled at cell midpoints of spacing <= 1/(10 m).
StahlTotikScan stahl_totik_scan(const DiscretizedMeasure& mu, const IntervalUnion& e, int m, double eta);

// Atoms y^k at x_k = (k - 2^j) / 2^j for 2^j <= k < 2^{j+1}, kept while
// k log y >= log_cutoff. Coincident positions are not merged.
struct LogAtoms {
  std::vector<double> nodes;
  std::vector<double> log_weights;
};
LogAtoms dyadic_atoms(double y, double log_cutoff = -690.0);
DiscretizedMeasure to_measure(const LogAtoms& atoms);

struct PurePointBound {
  double d{0.0};
  double log_tail{0.0};   // log sum_{j > n} a_j
  double log_bound{0.0};  // n log d + log_tail / 2
};

// Right side of ||P_n||_{L^2(mu)} <= d^n (sum_{j>n} a_j)^{1/2} for
// mu = sum_j a_j delta_{x_j}, in the given atom order.
PurePointBound pure_point_bound(const LogAtoms& atoms, std::size_t n);
// log ||P_n||_{L^2(mu)} = log(a_1 ... a_n) + log(mass) / 2.
double log_monic_norm(const LogAtoms& atoms, std::size_t n);

// eta = sum_{n <= n_terms} n^{-3} mu_n, where mu_n rescales mu on each cell
// (j/n, (j+1)/n] of positive mass to unit mass. Absolutely continuous parts
// come back split at every cell boundary.
MeasureSpec regularize_measure(const MeasureSpec& mu, const IntervalUnion& e, int n_terms);

}  // namespace logpot
