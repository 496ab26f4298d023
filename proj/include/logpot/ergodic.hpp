#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "logpot/oprl.hpp"
#include "logpot/potential.hpp"
#include "logpot/setgeom.hpp"

namespace logpot {

enum class FamilyKind { Free, Anderson, AlmostMathieu, DecayingRandom, Custom };

// A family of Jacobi matrices J(omega). Sample k of a batch uses its own
// omega: seed_for(seed, k) for the random kinds, phase + 2 pi k / batch for
// almost Mathieu.
struct ErgodicFamily {
  FamilyKind kind{FamilyKind::Free};
  double a{1.0};                 // constant off-diagonal
  double b_lo{0.0}, b_hi{0.0};   // anderson: b uniform on [b_lo, b_hi]
  double lambda{0.0};            // almost Mathieu coupling / decaying amplitude
  double freq{0.0};              // almost Mathieu frequency
  double phase{0.0};             // almost Mathieu phase
  double decay{0.0};             // decaying random exponent gamma
  std::uint64_t seed{0};
  // custom: (n, sample index) -> parameters; must be deterministic.
  std::function<JacobiParams(std::size_t, std::size_t)> custom;

  static ErgodicFamily free_family();
  static ErgodicFamily anderson(double b_lo, double b_hi, std::uint64_t seed, double a = 1.0);
  static ErgodicFamily almost_mathieu(double lambda, double freq, double phase);
  static ErgodicFamily decaying_random(double lambda, double decay, std::uint64_t seed);
};

// pi (sqrt 5 - 1), the golden frequency.
double golden_frequency();

std::uint64_t seed_for(std::uint64_t seed, std::size_t sample);

// First n Jacobi parameters of sample `sample` out of a batch of `batch`.
JacobiParams sample(const ErgodicFamily& f, std::size_t n, std::size_t sample = 0, std::size_t batch = 1);

// (1/n) log ||A_{n-1} ... A_0|| with det-one factors
// A_k = (1/a_{k+1}) [[z - b_{k+1}, -1], [a_{k+1}^2, 0]], renormalized by the
// largest column norm every 32 steps.
double log_transfer_norm(const JacobiParams& j, std::size_t n, std::complex<double> z);

struct LyapunovEstimate {
  double gamma{0.0};
  double std_error{0.0};
  std::vector<double> per_sample;
};

LyapunovEstimate lyapunov(const ErgodicFamily& f, std::complex<double> z, std::size_t n, std::size_t n_samples);

// Pooled eigenvalues of the n x n truncations, each of mass 1 / (n n_samples).
DiscretizedMeasure density_of_states(const ErgodicFamily& f, std::size_t n, std::size_t n_samples);

// exp of the mean of log a_k over k <= n and the whole batch.
double geometric_mean_a(const ErgodicFamily& f, std::size_t n, std::size_t n_samples);

struct ThoulessReport {
  std::vector<std::complex<double>> z;
  std::vector<double> gamma;         // Lyapunov estimate
  std::vector<double> log_potential; // int log|z - x| d nu_hat
  std::vector<double> residual;
  double log_inv_a{0.0};             // log(1 / A_hat)
  double max_residual{0.0};
};

// |gamma(z) - log(1/A) - int log|z - x| d nu(x)| with all three quantities
// estimated from the same batch. z must avoid the real spectrum.
ThoulessReport thouless_check(const ErgodicFamily& f, std::span<const std::complex<double>> z_list, std::size_t n,
                              std::size_t n_samples);

// Spectrum proxy: pooled DOS eigenvalues split wherever consecutive ones are
// more than gap_factor / n apart; clusters lighter than 1 / (2 n n_samples)
// are dropped and single-point clusters get width 1 / n.
IntervalUnion estimate_spectrum(const DiscretizedMeasure& dos, std::size_t n, std::size_t n_samples,
                                double gap_factor = 4.0);

struct RegularityIdentityReport {
  double gamma_n{0.0};        // (a_1 ... a_n)^{1/n}
  double capacity{0.0};       // C(E)
  double mean_lyapunov{0.0};  // int gamma(x + i eps) d rho_E
  double rhs{0.0};            // C(E) exp(-mean_lyapunov)
  double residual{0.0};       // |gamma_n - rhs|
  double epsilon{0.0};
  std::size_t nodes{0};
};

// Checks Gamma_n = C(E) exp(-int gamma d rho_E) with gamma sampled at
// x + i epsilon on Gauss-Chebyshev nodes of rho_E (`per_interval` per interval).
RegularityIdentityReport regularity_identity_check(const ErgodicFamily& f, const IntervalUnion& e, std::size_t n,
                                                   std::size_t n_samples, double epsilon = 1e-4,
                                                   std::size_t per_interval = 8);

// Rotation-invariant radial law for i.i.d. Verblunsky coefficients:
// uniform on the disk |z| <= radius (radius 0 is the point mass at 0).
struct RadialLaw {
  double radius{0.0};
};

struct RotationOpucReport {
  double product_root{0.0};   // mean over samples of (rho_0 ... rho_{n-1})^{1/n}
  double std_error{0.0};
  // exp(int log(1 - |z|^2) d sigma_0) by radial Gauss-Legendre quadrature.
  double target_full{0.0};
  // exp((1/2) int log(1 - |z|^2) d sigma_0), the almost sure limit of the product.
  double target_half{0.0};
  double angle_ks{0.0};       // pooled zero angles of Phi_n vs uniform
  std::size_t zeros{0};
};

// Samples n_samples coefficient sequences of length n from the law; zeros of
// Phi_{zero_degree} (at most 128) give the angle statistic. Throws BadLaw when
// radius >= 1.
RotationOpucReport rotation_opuc_check(const RadialLaw& law, std::size_t n, std::size_t n_samples, std::uint64_t seed,
                                       std::size_t zero_degree = 64);

}  // namespace logpot
