#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "logpot/ergodic.hpp"
#include "logpot/error.hpp"
#include "logpot/potential.hpp"

using namespace logpot;
using cd = std::complex<double>;

namespace {

double arcsine_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + std::asin(0.5 * x) / std::numbers::pi;
}

const ErgodicFamily kMathieu = ErgodicFamily::almost_mathieu(4.0, golden_frequency(), 0.0);

}  // namespace

TEST_CASE("samplers") {
  CHECK(sample(kMathieu, 3).b[0] == doctest::Approx(-2.9494755123132794).epsilon(1e-15));
  CHECK(sample(kMathieu, 3).a == std::vector<double>(3, 1.0));

  const auto flat = sample(ErgodicFamily::anderson(0.0, 0.0, 9), 50);
  for (double b : flat.b) CHECK(b == 0.0);

  const auto dec = sample(ErgodicFamily::decaying_random(1.0, 0.6, 5), 100);
  for (std::size_t k = 0; k < 100; ++k) CHECK(std::abs(dec.b[k]) <= std::pow(static_cast<double>(k + 1), -0.6));

  const auto an = ErgodicFamily::anderson(-1.0, 1.0, 42);
  const auto s1 = sample(an, 200, 3, 8);
  const auto s2 = sample(an, 200, 3, 8);
  CHECK(s1.b == s2.b);
  CHECK(sample(an, 200, 4, 8).b != s1.b);
  for (double b : s1.b) CHECK(std::abs(b) <= 1.0);
}

TEST_CASE("one transfer step") {
  // A_0(3) = [[3, -1], [1, 0]] for the free matrix; its norm is the larger
  // singular value sqrt((11 + sqrt(117)) / 2).
  const auto j = free_jacobi(1);
  CHECK(log_transfer_norm(j, 1, 3.0) == doctest::Approx(0.5 * std::log((11.0 + std::sqrt(117.0)) / 2.0)).epsilon(1e-14));
}

TEST_CASE("free Lyapunov exponent") {
  const auto f = ErgodicFamily::free_family();
  const auto g3 = lyapunov(f, 3.0, 100000, 2);
  CHECK(std::abs(g3.gamma - std::log((3.0 + std::sqrt(5.0)) / 2.0)) < 1e-4);
  CHECK(g3.std_error <= 1e-3);
  CHECK(std::abs(lyapunov(f, 1.0, 100000, 1).gamma) < 5e-3);
  // Green's function of [-2,2] at 5i.
  const double want = std::log(std::abs(cd(0.0, 2.5) + std::sqrt(cd(-6.25 - 1.0, 0.0))));
  CHECK(lyapunov(f, cd(0.0, 5.0), 100000, 1).gamma == doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("almost Mathieu exponent on the spectrum is log(lambda/2)") {
  const auto g = lyapunov(kMathieu, cd(0.0, 1e-4), 100000, 16);
  CHECK(std::abs(g.gamma - std::log(2.0)) < 5e-2);
  CHECK(g.gamma >= -3.0 * g.std_error);
}

TEST_CASE("Lyapunov symmetry, positivity and phase consistency") {
  for (cd z : {cd(7.0, 0.0), cd(0.0, 1.0), cd(5.0, 0.5)}) {
    const auto g = lyapunov(kMathieu, z, 20000, 16);
    const auto gc = lyapunov(kMathieu, std::conj(z), 20000, 16);
    CHECK(std::abs(g.gamma - gc.gamma) <= std::max(g.std_error, 1e-14));
    CHECK(g.gamma >= -3.0 * g.std_error);
    // Off the spectrum every phase converges to the same value: the spread
    // stays within five per-phase standard deviations.
    const auto [lo, hi] = std::minmax_element(g.per_sample.begin(), g.per_sample.end());
    const double sd = g.std_error * std::sqrt(static_cast<double>(g.per_sample.size()));
    CHECK(*hi - *lo <= 5.0 * sd);
  }
  const auto an = lyapunov(ErgodicFamily::anderson(-1.0, 1.0, 3), cd(0.5, 0.0), 5000, 8);
  CHECK(an.gamma >= -3.0 * an.std_error);
  CHECK(an.gamma > 0.0);
}

TEST_CASE("density of states") {
  const auto free = density_of_states(ErgodicFamily::free_family(), 2000, 1);
  CHECK(free.size() == 2000);
  CHECK(free.total_mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ks_distance(free, arcsine_cdf) <= 0.02);

  const auto an = density_of_states(ErgodicFamily::anderson(-1.0, 1.0, 42), 2000, 32);
  CHECK(an.nodes.front() >= -3.0);
  CHECK(an.nodes.back() <= 3.0);
  const double ks = ks_distance(an, arcsine_cdf);
  CHECK(ks >= 0.05);
  // Frozen regression value for seed 42.
  CHECK(ks == doctest::Approx(0.11476562499983733).epsilon(1e-9));
}

TEST_CASE("DOS support stays inside the operator-norm bound") {
  const auto f = ErgodicFamily::anderson(-0.5, 2.0, 8, 0.7);
  const auto dos = density_of_states(f, 400, 4);
  CHECK(dos.nodes.front() >= -0.5 - 1.4 - 1e-12);
  CHECK(dos.nodes.back() <= 2.0 + 1.4 + 1e-12);
}

TEST_CASE("seeded runs are bit-identical") {
  const auto f = ErgodicFamily::anderson(-1.0, 1.0, 77);
  const auto a = lyapunov(f, cd(0.3, 0.2), 3000, 6);
  const auto b = lyapunov(f, cd(0.3, 0.2), 3000, 6);
  CHECK(a.per_sample == b.per_sample);
  CHECK(density_of_states(f, 300, 3).nodes == density_of_states(f, 300, 3).nodes);
}

TEST_CASE("Thouless formula, free family") {
  const std::vector<cd> zs{3.0, cd(2.0, 1.0), cd(0.0, 5.0)};
  const auto f = ErgodicFamily::free_family();
  const auto big = thouless_check(f, zs, 10000, 1);
  CHECK(big.log_inv_a == 0.0);
  CHECK(big.max_residual <= 5e-3);
  const auto small = thouless_check(f, zs, 1000, 1);
  CHECK(big.max_residual < small.max_residual);
  const std::vector<cd> on_axis{0.5};
  CHECK_THROWS_AS(thouless_check(f, on_axis, 200, 1), Error);
}

TEST_CASE("Thouless formula, Anderson model") {
  // Desk-scale version of the n = 1e4, 32-sample check.
  const std::vector<cd> zs{4.0};
  const auto r = thouless_check(ErgodicFamily::anderson(-1.0, 1.0, 42), zs, 2000, 16);
  CHECK(r.log_inv_a == 0.0);
  CHECK(r.max_residual <= 2e-2);
}

TEST_CASE("regularity identity") {
  const auto free = regularity_identity_check(ErgodicFamily::free_family(), IntervalUnion::normalize({{-2.0, 2.0}}),
                                              10000, 1);
  CHECK(free.gamma_n == 1.0);
  CHECK(free.capacity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(free.residual <= 1e-2);

  // Almost Mathieu: gamma = log 2 on the spectrum forces C(spec) = 2.
  const auto dos = density_of_states(kMathieu, 2000, 16);
  const auto e = estimate_spectrum(dos, 2000, 16);
  CHECK(e.size() > 1);
  const auto am = regularity_identity_check(kMathieu, e, 10000, 16);
  CHECK(am.gamma_n == 1.0);
  CHECK(am.capacity == doctest::Approx(2.0).epsilon(5e-2));
  CHECK(am.mean_lyapunov == doctest::Approx(std::log(2.0)).epsilon(5e-2));
  CHECK(am.residual <= 5e-2);

  const auto an_f = ErgodicFamily::anderson(-1.0, 1.0, 42);
  const auto an_e = estimate_spectrum(density_of_states(an_f, 2000, 16), 2000, 16);
  CHECK(regularity_identity_check(an_f, an_e, 5000, 16).residual <= 5e-2);
}

TEST_CASE("Anderson essential spectrum capacity") {
  // C([-2 + alpha, 2 + beta]) = (4 + beta - alpha) / 4.
  for (auto [al, be] : {std::pair{-1.0, 1.0}, std::pair{0.0, 0.5}, std::pair{-3.0, 2.0}}) {
    CHECK(capacity(IntervalUnion::normalize({{-2.0 + al, 2.0 + be}})) ==
          doctest::Approx((4.0 + be - al) / 4.0).epsilon(1e-12));
  }
}

TEST_CASE("spectrum estimate") {
  DiscretizedMeasure dos = DiscretizedMeasure::from_atoms({0.0, 0.001, 0.002, 1.0}, {0.25, 0.25, 0.25, 0.25});
  const auto e = estimate_spectrum(dos, 1000, 1);
  REQUIRE(e.size() == 2);
  CHECK(e[0].lo == 0.0);
  CHECK(e[0].hi == 0.002);
  CHECK(e[1].length() == doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("rotation invariant OPUC") {
  const auto point = rotation_opuc_check(RadialLaw{0.0}, 500, 4, 1);
  CHECK(point.product_root == 1.0);
  CHECK(point.target_full == 1.0);

  const auto r = rotation_opuc_check(RadialLaw{0.5}, 1000, 64, 7);
  // Radial quadrature: int_0^{1/2} log(1 - r^2) 8 r dr = -0.13695378264465722.
  CHECK(std::log(r.target_full) == doctest::Approx(-0.13695378264465722).epsilon(1e-13));
  CHECK(r.target_half == doctest::Approx(std::exp(-0.5 * 0.13695378264465722)).epsilon(1e-13));
  // rho_j = (1 - |alpha_j|^2)^{1/2}, so the product follows the halved exponent.
  CHECK(std::abs(r.product_root - r.target_half) <= 3.0 * r.std_error);
  CHECK(std::abs(r.product_root - r.target_full) > 3.0 * r.std_error);
  CHECK(r.zeros == 64 * 64);
  CHECK(r.angle_ks <= 0.05);

  CHECK_THROWS_AS(rotation_opuc_check(RadialLaw{1.0}, 10, 1, 1), Error);
}
