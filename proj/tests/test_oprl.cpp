#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "logpot/error.hpp"
#include "logpot/oprl.hpp"
#include "logpot/potential.hpp"

using namespace logpot;

namespace {

constexpr double kPi = std::numbers::pi;

MeasureSpec semicircle() {
  MeasureSpec s;
  // Flag Both: the rule carries (4 - x^2)^{-1/2}, so the remaining factor is
  // a polynomial and Gauss-Chebyshev is exact.
  s.ac_components.push_back(
      {{-2.0, 2.0}, [](double x) { return std::sqrt(4.0 - x * x) / (2.0 * kPi); }, EndpointSingularity::Both});
  return s;
}

MeasureSpec arcsine(double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  MeasureSpec s;
  s.ac_components.push_back({{a, b},
                             [c, r](double x) { return 1.0 / (kPi * std::sqrt(r * r - (x - c) * (x - c))); },
                             EndpointSingularity::Both});
  return s;
}

double arcsine_cdf(double x) {
  if (x <= -2) return 0.0;
  if (x >= 2) return 1.0;
  return 1.0 - std::acos(x / 2.0) / kPi;
}

// Monic P_n at x from the Jacobi recursion.
double monic_eval(const JacobiParams& j, std::size_t n, double x) {
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a2 = k > 0 ? j.a[k - 1] * j.a[k - 1] : 0.0;
    const double next = (x - j.b[k]) * cur - a2 * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Roots of the monic P_n by Newton with implicit deflation (Maehly), starting
// above the Gershgorin bound so each run descends onto the largest remaining root.
std::vector<double> deflated_roots(const JacobiParams& j, std::size_t n) {
  double top = -1e300;
  for (std::size_t k = 0; k < n; ++k) top = std::max(top, j.b[k] + 2.0 * j.sup_a());
  std::vector<double> roots;
  double x = top + 1.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (int it = 0; it < 200; ++it) {
      double p0 = 0.0, p = 1.0, d0 = 0.0, d = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double a2 = k > 0 ? j.a[k - 1] * j.a[k - 1] : 0.0;
        const double pn = (x - j.b[k]) * p - a2 * p0;
        const double dn = p + (x - j.b[k]) * d - a2 * d0;
        p0 = p;
        p = pn;
        d0 = d;
        d = dn;
      }
      double s = 0.0;
      for (double q : roots) s += 1.0 / (x - q);
      const double step = p / (d - p * s);
      x -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
    roots.push_back(x);
    x -= 1e-7;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

JacobiParams random_jacobi(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> ua(0.3, 1.5);
  std::uniform_real_distribution<double> ub(-1.0, 1.0);
  JacobiParams j;
  for (std::size_t k = 0; k < n; ++k) {
    j.a.push_back(ua(rng));
    j.b.push_back(ub(rng));
  }
  return j;
}

std::vector<double> golden_nodes(int count) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<double> x;
  for (int j = 1; j <= count; ++j) {
    double t = j * phi;
    t -= std::floor(t);
    x.push_back(t);
  }
  return x;
}

double gamma_at(const JacobiParams& j, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::log(j.a[k]);
  return std::exp(s / static_cast<double>(n));
}

}  // namespace

TEST_CASE("classical measures recover their Jacobi parameters") {
  const auto js = jacobi_from_measure(discretize(semicircle(), 64), 20);
  const auto ja = jacobi_from_measure(discretize(arcsine(-2.0, 2.0), 64), 20);
  REQUIRE(js.size() == 20);
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(std::abs(js.a[k] - 1.0) < 1e-8);
    CHECK(std::abs(js.b[k]) < 1e-8);
    CHECK(std::abs(ja.a[k] - (k == 0 ? std::sqrt(2.0) : 1.0)) < 1e-8);
    CHECK(std::abs(ja.b[k]) < 1e-8);
  }
}

TEST_CASE("two atoms and rank deficiency") {
  const auto mu = DiscretizedMeasure::from_atoms({-1.0, 1.0}, {0.5, 0.5});
  const auto j = jacobi_from_measure(mu, 1);
  CHECK(j.a[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(j.b[0]) < 1e-15);
  CHECK_THROWS_AS(jacobi_from_measure(mu, 2), Error);
  try {
    jacobi_from_measure(mu, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("discrete orthonormality") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 3.0);
  std::vector<double> x(300);
  std::vector<double> w(300);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = u(rng);
    w[i] = 0.1 + std::abs(u(rng));
  }
  const auto mu = DiscretizedMeasure::from_atoms(x, w);
  const std::size_t n = 40;
  const auto j = jacobi_from_measure(mu, n);
  double worst = 0.0;
  for (std::size_t p = 0; p <= n - 1; ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      double s = 0.0;
      for (std::size_t i = 0; i < mu.size(); ++i) {
        s += mu.weights[i] / mu.total_mass * orthonormal_eval(j, p, mu.nodes[i]).real() *
             orthonormal_eval(j, q, mu.nodes[i]).real();
      }
      worst = std::max(worst, std::abs(s - (p == q ? 1.0 : 0.0)));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("norm product identity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(200);
  std::vector<double> w(200);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 4.0 * u(rng) - 2.0;
    w[i] = u(rng) + 0.05;
  }
  const auto mu = DiscretizedMeasure::from_atoms(x, w);
  const auto j = jacobi_from_measure(mu, 25);
  for (std::size_t n : {1u, 5u, 12u, 25u}) {
    double direct = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) direct += mu.weights[i] * std::pow(monic_eval(j, n, mu.nodes[i]), 2);
    double product = std::sqrt(mu.total_mass);
    for (std::size_t k = 0; k < n; ++k) product *= j.a[k];
    CHECK(std::sqrt(direct) == doctest::Approx(product).epsilon(1e-8));
  }
}

TEST_CASE("orthonormal_eval") {
  const auto f = free_jacobi(20);
  CHECK(orthonormal_eval(f, 0, {0.7, 0.2}) == std::complex<double>(1.0, 0.0));
  CHECK(orthonormal_eval(f, 2, 0.0).real() == doctest::Approx(-1.0));
  for (double theta : {0.3, 1.1, 2.5}) {
    for (std::size_t n : {1u, 4u, 9u}) {
      const double want = std::sin((n + 1) * theta) / std::sin(theta);
      CHECK(orthonormal_eval(f, n, 2.0 * std::cos(theta)).real() == doctest::Approx(want).epsilon(1e-12));
    }
  }
  const double s5 = std::sqrt(5.0);
  const double want = (std::pow((3 + s5) / 2, 11) - std::pow((3 - s5) / 2, 11)) / s5;
  CHECK(orthonormal_eval(f, 10, 3.0).real() == doctest::Approx(want).epsilon(1e-9));
  CHECK(log_abs_orthonormal(f, 10, 3.0) == doctest::Approx(std::log(want)).epsilon(1e-12));
  CHECK_THROWS_AS(orthonormal_eval(f, 21, 0.0), Error);
}

TEST_CASE("zero counting") {
  const auto f = free_jacobi(2000);
  const auto z3 = zero_counting(f, 3);
  REQUIRE(z3.points.size() == 3);
  CHECK(z3.points[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-13));
  CHECK(std::abs(z3.points[1]) < 1e-13);
  CHECK(z3.points[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  JacobiParams one{{0.5}, {0.37}};
  CHECK(zero_counting(one, 1).points[0] == doctest::Approx(0.37));

  const auto z50 = zero_counting(f, 50);
  const std::vector<double> w(50, 1.0);
  CHECK(ks_distance(z50.points, w, arcsine_cdf) <= 0.03);

  // The quantile-grid bound sits within 1/levels above the exact distance.
  const auto eq = equilibrium(IntervalUnion::normalize({{-2.0, 2.0}}));
  const double exact = ks_distance(z50.points, w, arcsine_cdf);
  const double grid = zero_counting_ks(f, 50, eq, 1024);
  CHECK(grid >= exact - 1e-12);
  CHECK(grid <= exact + 1.0 / 1024 + 1e-12);
}

TEST_CASE("zeros match deflated recursion roots and interlace") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto j = random_jacobi(rng, 13);
    for (std::size_t n = 1; n <= 12; ++n) {
      const auto z = zero_counting(j, n).points;
      const auto d = deflated_roots(j, n);
      for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(z[k] - d[k]) <= 1e-8);
      if (n >= 2) {
        const auto prev = zero_counting(j, n - 1).points;
        for (std::size_t k = 0; k + 1 < n; ++k) {
          CHECK(z[k] < prev[k]);
          CHECK(prev[k] < z[k + 1]);
        }
      }
    }
  }
}

TEST_CASE("at most one zero in a gap of the support") {
  const auto e = IntervalUnion::normalize({{-2.0, -0.5}, {0.3, 2.0}});
  const auto eq = equilibrium(e);
  const auto j = jacobi_from_measure(eq.quadrature(200), 60);
  for (std::size_t n = 1; n <= 60; ++n) {
    const auto z = zero_counting(j, n).points;
    std::size_t in_gap = 0;
    for (double r : z) {
      CHECK(r >= -2.0 - 1e-9);
      CHECK(r <= 2.0 + 1e-9);
      if (r > -0.5 && r < 0.3) ++in_gap;
    }
    CHECK(in_gap <= 1);
  }
}

TEST_CASE("example constructors") {
  const auto s = sparse_perturbation_jacobi(30);
  CHECK(s.a[0] == 0.5);
  CHECK(s.a[3] == 0.5);
  CHECK(s.a[4] == 1.0);
  CHECK(s.a[8] == 0.5);
  CHECK(s.a[24] == 0.5);
  CHECK(s.a[25] == 1.0);
  for (double b : s.b) CHECK(b == 0.0);

  const auto r1 = random_sign_jacobi(100, 9);
  const auto r2 = random_sign_jacobi(100, 9);
  CHECK(r1.b == r2.b);
  for (double b : r1.b) CHECK(std::abs(b) == 1.0);
  for (double a : r1.a) CHECK(a == 0.5);

  const auto bl = block_jacobi(20);
  const std::vector<double> want{1, 1, 0, 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1};
  CHECK(bl.b == want);
}

TEST_CASE("regularity verdicts") {
  const auto e = IntervalUnion::normalize({{-2.0, 2.0}});
  const std::vector<std::size_t> ns{100, 1000, 10000};

  const auto free = regularity_diagnostic(free_jacobi(10000), e, ns);
  CHECK(free.verdict == Verdict::Regular);
  for (double g : free.gamma_n) CHECK(g == doctest::Approx(1.0));
  CHECK(free.capacity == doctest::Approx(1.0).epsilon(1e-10));

  const auto sparse = regularity_diagnostic(sparse_perturbation_jacobi(10000), e, ns);
  CHECK(sparse.verdict == Verdict::Regular);
  CHECK(sparse.gamma_n.back() == doctest::Approx(std::pow(2.0, -100.0 / 10000.0)).epsilon(1e-12));
  CHECK(sparse.gamma_n[1] == doctest::Approx(std::pow(2.0, -31.0 / 1000.0)).epsilon(1e-12));
  CHECK(sparse.ks_distance.back() < sparse.ks_distance.front());

  const auto rs = regularity_diagnostic(random_sign_jacobi(10000, 1), e, ns);
  CHECK(rs.verdict == Verdict::NotRegular);
  for (double g : rs.gamma_n) CHECK(g == doctest::Approx(0.5));

  const auto bl = regularity_diagnostic(block_jacobi(10000), IntervalUnion::normalize({{-2.0, 3.0}}), ns);
  CHECK(bl.capacity == doctest::Approx(1.25).epsilon(1e-10));
  CHECK(bl.verdict == Verdict::NotRegular);

  // Gamma_n = 1 cannot come from a measure whose support has capacity 1/2.
  CHECK_THROWS_AS(regularity_diagnostic(free_jacobi(1000), IntervalUnion::normalize({{-1.0, 1.0}}),
                                        std::vector<std::size_t>{100, 1000}),
                  Error);
}

TEST_CASE("Erdos-Turan weight is regular") {
  MeasureSpec legendre;
  legendre.ac_components.push_back({{-2.0, 2.0}, [](double) { return 0.25; }, EndpointSingularity::None});
  const auto j = jacobi_from_measure(discretize_for_degree(legendre, 200), 200);
  const std::vector<std::size_t> ns{50, 100, 200};
  const auto rep = regularity_diagnostic(j, IntervalUnion::normalize({{-2.0, 2.0}}), ns);
  CHECK(rep.gamma_n.back() >= 0.97);
  CHECK(rep.verdict == Verdict::Regular);
}

TEST_CASE("Gamma_n of an equilibrium measure stays near the capacity") {
  const auto e = IntervalUnion::normalize({{-1.0, -0.2}, {0.4, 1.5}});
  const auto eq = equilibrium(e);
  const auto j = jacobi_from_measure(eq.quadrature(400), 300);
  // Gamma_n approaches C(E) from above like 1/n, so only large n are tested.
  for (std::size_t n = 150; n <= 300; n += 50) CHECK(gamma_at(j, n) <= eq.capacity() + 2e-3);
}

TEST_CASE("lower bound off the hull") {
  const auto f = free_jacobi(50);
  const auto rep = lower_bound_check(f, 3.0, 5, {-2.0, 2.0});
  CHECK(rep.holds);
  CHECK(std::exp(2.0 * rep.log_abs_pn) == doctest::Approx(20736.0).epsilon(1e-12));
  CHECK(std::exp(2.0 * rep.log_bound) == doctest::Approx(0.25 * std::pow(1.25, 4)).epsilon(1e-12));

  const auto r0 = lower_bound_check(f, {0.0, 1.0}, 0, {-2.0, 2.0});
  CHECK(r0.holds);
  CHECK(r0.log_abs_pn == 0.0);

  CHECK_THROWS_AS(lower_bound_check(f, 1.0, 3, {-2.0, 2.0}), Error);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto j = random_jacobi(rng, 40);
    double lo = 1e300;
    double hi = -1e300;
    for (std::size_t k = 0; k < j.size(); ++k) {
      const double r = 2.0 * j.sup_a();
      lo = std::min(lo, j.b[k] - r);
      hi = std::max(hi, j.b[k] + r);
    }
    std::complex<double> z;
    do {
      z = {u(rng), u(rng)};
    } while (z.real() >= lo && z.real() <= hi && std::abs(z.imag()) < 1e-3);
    const auto r = lower_bound_check(j, z, 30, {lo, hi});
    CHECK(r.holds);
  }
}

TEST_CASE("Stahl-Totik scans") {
  const auto e01 = IntervalUnion::normalize({{0.0, 1.0}});
  const auto arc = discretize(arcsine(-2.0, 2.0), 4096);
  // Radius 1/100 windows hold about 0.003 of the mass, so eta must exceed ~0.06.
  for (double eta : {0.5, 1.0, 5.0}) {
    CHECK(stahl_totik_scan(arc, IntervalUnion::normalize({{-2.0, 2.0}}), 100, eta).bad_length == 0.0);
  }

  // Dyadic atoms with y = 0.1, m = 64; exact lengths from breakpoint
  // enumeration with rational arithmetic.
  const auto mu = to_measure(dyadic_atoms(0.1));
  CHECK(stahl_totik_scan(mu, e01, 64, 1.0).bad_length == doctest::Approx(0.578125).epsilon(1e-12));
  CHECK(stahl_totik_scan(mu, e01, 64, 2.0).bad_length == doctest::Approx(0.140625).epsilon(1e-12));
  CHECK(stahl_totik_scan(mu, e01, 64, 4.0).bad_length == doctest::Approx(0.015625).epsilon(1e-12));
  CHECK(stahl_totik_scan(mu, e01, 64, 5.0).bad_length == 0.0);

  const auto delta = DiscretizedMeasure::from_atoms({0.0}, {1.0});
  const auto s = stahl_totik_scan(delta, IntervalUnion::normalize({{-1.0, 1.0}}), 10, 1.0);
  CHECK(s.bad_length == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(s.spacing <= 0.01 + 1e-15);
}

TEST_CASE("dyadic atoms") {
  const auto d = dyadic_atoms(0.5, std::log(0.5) * 7.5);
  REQUIRE(d.nodes.size() == 7);
  const std::vector<double> want{0.0, 0.0, 0.5, 0.0, 0.25, 0.5, 0.75};
  CHECK(d.nodes == want);
  CHECK(d.log_weights[2] == doctest::Approx(3.0 * std::log(0.5)));
}

TEST_CASE("pure point bound with a_j = exp(-j^2)") {
  LogAtoms atoms;
  atoms.nodes = golden_nodes(60);
  for (int j = 1; j <= 60; ++j) atoms.log_weights.push_back(-static_cast<double>(j) * j);
  // log ||P_n|| from a 250-digit Stieltjes recursion on the same atoms.
  const std::vector<std::pair<std::size_t, double>> oracle{{0, -0.47554642755756843}, {1, -2.9851537283650073},
                                                           {5, -25.006241741607677},  {10, -74.147285719379583},
                                                           {20, -239.9524938830312},  {30, -520.8395301887049}};
  for (const auto& [n, want] : oracle) {
    const double got = log_monic_norm(atoms, n);
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
    const auto b = pure_point_bound(atoms, n);
    CHECK(got <= b.log_bound + 1e-12);
  }
  CHECK(pure_point_bound(atoms, 0).log_bound == doctest::Approx(log_monic_norm(atoms, 0)).epsilon(1e-14));
  // ||P_n||^{1/n} falls toward 0.
  double prev = 1.0;
  for (std::size_t n : {5u, 10u, 20u, 30u}) {
    const double root = std::exp(log_monic_norm(atoms, n) / static_cast<double>(n));
    CHECK(root < prev);
    prev = root;
  }
  CHECK(prev < 1e-7);
}

TEST_CASE("pure point bound on the dyadic measure") {
  const auto atoms = dyadic_atoms(0.5);
  const auto b = pure_point_bound(atoms, 16);
  CHECK(b.d <= 1.0);
  CHECK(log_monic_norm(atoms, 16) == doctest::Approx(-31.88214674963753).epsilon(1e-10));
  CHECK(log_monic_norm(atoms, 16) <= b.log_bound);
}

TEST_CASE("regularize_measure") {
  const auto e01 = IntervalUnion::normalize({{0.0, 1.0}});
  // One cell at n_terms = 1: total mass equals the occupied-cell count.
  MeasureSpec atoms;
  atoms.point_masses = {{0.25, 0.3}, {0.5, 0.01}, {1.5, 2.0}};
  const auto one = regularize_measure(atoms, IntervalUnion::normalize({{0.0, 2.0}}), 1);
  double total = 0.0;
  for (const auto& p : one.point_masses) total += p.weight;
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(regularize_measure(atoms, e01, 3), Error);

  const auto arc = arcsine(0.0, 1.0);
  const auto eta = regularize_measure(arc, e01, 40);
  CHECK(discretize(regularize_measure(arc, e01, 1), 64).total_mass == doctest::Approx(1.0).epsilon(1e-10));

  // Windows of radius 1/n away from the ends hold at least (2n)^{-3}.
  const auto eta_d = discretize_for_degree(eta, 100);
  for (int n = 2; n <= 20; ++n) {
    for (double x = 1.0 / n + 0.01; x < 1.0 - 1.0 / n - 0.01; x += 0.013) {
      double w = 0.0;
      for (std::size_t i = 0; i < eta_d.size(); ++i) {
        if (std::abs(eta_d.nodes[i] - x) <= 1.0 / n) w += eta_d.weights[i];
      }
      CHECK(w >= std::pow(2.0 * n, -3.0));
    }
  }

  const auto j = jacobi_from_measure(discretize_for_degree(eta, 200), 200);
  const std::vector<std::size_t> ns{50, 100, 200};
  const auto rep = regularity_diagnostic(j, e01, ns);
  CHECK(rep.verdict == Verdict::Regular);
}

TEST_CASE("regularize_measure lifts a fast-decaying pure point measure") {
  const auto e01 = IntervalUnion::normalize({{0.0, 1.0}});
  MeasureSpec mu;
  const auto x = golden_nodes(400);
  for (int k = 0; k < 400; ++k) mu.point_masses.push_back({x[static_cast<std::size_t>(k)], std::exp(-1.7 * (k + 1))});
  const auto eta = regularize_measure(mu, e01, 40);
  auto as_measure = [](const MeasureSpec& s) {
    std::vector<double> nodes;
    std::vector<double> weights;
    for (const auto& p : s.point_masses) {
      nodes.push_back(p.location);
      weights.push_back(p.weight);
    }
    return DiscretizedMeasure::from_atoms(nodes, weights);
  };
  const auto jm = jacobi_from_measure(as_measure(mu), 200);
  const auto je = jacobi_from_measure(as_measure(eta), 200);
  for (std::size_t n = 5; n <= 200; n += 5) CHECK(gamma_at(je, n) > gamma_at(jm, n));
  for (std::size_t n : {5u, 10u, 25u}) CHECK(std::abs(gamma_at(je, n) - 0.25) <= 0.15 * 0.25);
}

TEST_CASE("deterministic reports") {
  const auto e = IntervalUnion::normalize({{-2.0, 2.0}});
  const std::vector<std::size_t> ns{100, 500};
  const auto a = regularity_diagnostic(random_sign_jacobi(500, 4), e, ns);
  const auto b = regularity_diagnostic(random_sign_jacobi(500, 4), e, ns);
  CHECK(a.gamma_n == b.gamma_n);
  CHECK(a.ks_distance == b.ks_distance);
  CHECK(a.limit == b.limit);
}
