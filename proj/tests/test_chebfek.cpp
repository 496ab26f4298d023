#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "logpot/chebfek.hpp"
#include "logpot/error.hpp"
#include "logpot/potential.hpp"

using namespace logpot;

namespace {

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
  return v;
}

double product_sup(const IntervalUnion& e, const std::vector<double>& roots) {
  return sup_norm_on_set([&](double t) { return abs_product(roots, t); }, e, 4096);
}

const IntervalUnion kAsym = IntervalUnion::normalize({{-1.0, -0.3}, {0.2, 1.0}});

}  // namespace

TEST_CASE("Chebyshev norms on [-2,2] are 2") {
  const auto e = IntervalUnion::normalize({{-2.0, 2.0}});
  for (int n = 1; n <= 20; ++n) {
    const auto r = chebyshev(e, n, false);
    CHECK(r.sup_norm == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.coefficients.size() == static_cast<std::size_t>(n + 1));
    CHECK(r.coefficients.back() == 1.0);
  }
  // T_3 = x^3 - 3x in this normalization.
  const auto t3 = chebyshev(e, 3, false);
  CHECK(t3.coefficients[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t3.coefficients[1] == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(t3.coefficients[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("degree one on [0,1]") {
  const auto e = IntervalUnion::normalize({{0.0, 1.0}});
  for (bool restricted : {false, true}) {
    const auto r = chebyshev(e, 1, restricted);
    CHECK(r.sup_norm == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.coefficients[0] == doctest::Approx(-0.5).epsilon(1e-12));
  }
}

TEST_CASE("degree two on a symmetric pair matches a brute-force scan") {
  // On [-1,-0.5] u [0.5,1] the minimizer is even: x^2 - c.
  const auto e = IntervalUnion::normalize({{-1.0, -0.5}, {0.5, 1.0}});
  double best = 1e300;
  for (int k = 0; k <= 100000; ++k) {
    const double c = static_cast<double>(k) / 100000.0;
    best = std::min(best, std::max(std::abs(1.0 - c), std::abs(0.25 - c)));
  }
  const auto r = chebyshev(e, 2, false);
  CHECK(r.sup_norm == doctest::Approx(best).epsilon(1e-4));
  CHECK(r.sup_norm == doctest::Approx(0.375).epsilon(1e-10));
  // Restricted roots must sit in E; sqrt(0.625) already does.
  const auto rr = chebyshev(e, 2, true);
  CHECK(rr.sup_norm == doctest::Approx(0.375).epsilon(1e-10));
}

TEST_CASE("equioscillation on an asymmetric union") {
  for (int n : {3, 4, 7}) {
    const auto r = chebyshev(kAsym, n, false);
    REQUIRE(r.equioscillation_points.size() == static_cast<std::size_t>(n + 1));
    double prev = 0.0;
    for (double y : r.equioscillation_points) {
      CHECK(kAsym.contains(y, 1e-12));
      const double v = horner(r.coefficients, y);
      CHECK(std::abs(v) == doctest::Approx(r.sup_norm).epsilon(1e-7));
      if (prev != 0.0) CHECK(v * prev < 0.0);
      prev = v;
    }
    CHECK(product_sup(kAsym, r.roots) == doctest::Approx(r.sup_norm).epsilon(1e-7));
  }
}

TEST_CASE("restricted norms dominate and roots stay in E") {
  for (int n : {1, 2, 5, 8}) {
    const auto t = chebyshev(kAsym, n, false);
    const auto tr = chebyshev(kAsym, n, true);
    CHECK(tr.restricted);
    CHECK(t.sup_norm <= tr.sup_norm * (1.0 + 1e-9));
    for (double z : tr.roots) CHECK(kAsym.contains(z, 1e-12));
  }
  // Degree one: x - c with c in E is best at the inner end 0.2.
  CHECK(chebyshev(kAsym, 1, true).sup_norm == doctest::Approx(1.2).epsilon(1e-9));
  CHECK(chebyshev(kAsym, 1, false).sup_norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Chebyshev norms are submultiplicative") {
  std::vector<double> norm(13);
  for (int n = 1; n <= 12; ++n) norm[static_cast<std::size_t>(n)] = chebyshev(kAsym, n, false).sup_norm;
  for (int n = 1; n <= 6; ++n) {
    for (int m = 1; m <= 6; ++m) {
      CHECK(norm[static_cast<std::size_t>(n + m)] <=
            norm[static_cast<std::size_t>(n)] * norm[static_cast<std::size_t>(m)] * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("Fekete points on [-1,1] are Gauss-Lobatto nodes") {
  const auto e = IntervalUnion::normalize({{-1.0, 1.0}});
  const auto f3 = fekete(e, 3);
  CHECK(f3.points[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(f3.points[1]) < 1e-8);
  CHECK(f3.points[2] == doctest::Approx(1.0).epsilon(1e-12));
  // Interior nodes for five points are the zeros of P_4', x^2 = 3/7.
  const auto f5 = fekete(e, 5);
  const double s = std::sqrt(3.0 / 7.0);
  const std::vector<double> want{-1.0, -s, 0.0, s, 1.0};
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(f5.points[i] - want[i]) < 1e-8);
  CHECK(f5.grad_norm < 1e-9);
}

TEST_CASE("two-point Fekete set is the endpoints") {
  for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{-2.0, 2.0}, std::pair{3.0, 3.5}}) {
    const auto f = fekete(IntervalUnion::normalize({{a, b}}), 2);
    CHECK(f.points[0] == doctest::Approx(a).epsilon(1e-12));
    CHECK(f.points[1] == doctest::Approx(b).epsilon(1e-12));
    CHECK(f.zeta == doctest::Approx(b - a).epsilon(1e-12));
  }
}

TEST_CASE("Fekete constant matches the stored points") {
  const auto f = fekete(kAsym, 17);
  CHECK(fekete_constant(f.points) == doctest::Approx(f.zeta).epsilon(1e-12));
  CHECK(std::log(f.zeta) * 17 * 16 == doctest::Approx(f.log_q).epsilon(1e-10));
  CHECK(std::is_sorted(f.points.begin(), f.points.end()));
  for (double z : f.points) CHECK(kAsym.contains(z, 1e-12));
  CHECK(f.pinned >= 2);
}

TEST_CASE("transfinite diameter on [0,1]") {
  const auto z = transfinite_diameter(IntervalUnion::normalize({{0.0, 1.0}}), 40);
  REQUIRE(z.size() == 39);
  CHECK(z.front() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 1; k < z.size(); ++k) CHECK(z[k] <= z[k - 1] + 1e-10);
  // Lobatto-node oracle: zeta_40 = 0.27989225019655, zeta_10 = 0.35085483124632.
  CHECK(z.back() == doctest::Approx(0.27989225019655).epsilon(1e-10));
  CHECK(z[8] == doctest::Approx(0.35085483124632).epsilon(1e-10));
  CHECK(z.back() >= 0.25);
  CHECK(transfinite_diameter(IntervalUnion::normalize({{-2.0, 2.0}}), 2).front() == doctest::Approx(4.0));
}

TEST_CASE("Fekete polynomial norm identity") {
  const auto f = fekete(kAsym, 12);
  const auto& z = f.points;
  for (std::size_t k = 0; k < z.size(); ++k) {
    std::vector<double> others;
    double at_zk = 1.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j == k) continue;
      others.push_back(z[j]);
      at_zk *= std::abs(z[k] - z[j]);
    }
    CHECK(product_sup(kAsym, others) == doctest::Approx(at_zk).epsilon(1e-6));
  }
}

TEST_CASE("bounds chain") {
  const auto b1 = bounds_chain(IntervalUnion::normalize({{-2.0, 2.0}}), 10);
  CHECK(b1.holds);
  CHECK(b1.capacity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b1.chebyshev_root == doctest::Approx(std::pow(2.0, 0.1)).epsilon(1e-10));
  CHECK(b1.restricted_root == doctest::Approx(std::pow(2.0, 0.1)).epsilon(1e-10));

  const auto b2 = bounds_chain(IntervalUnion::normalize({{0.0, 1.0}}), 1);
  CHECK(b2.holds);
  CHECK(b2.capacity == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(b2.chebyshev_root == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b2.restricted_root == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b2.zeta_next == doctest::Approx(1.0).epsilon(1e-12));

  const auto b3 = bounds_chain(kAsym, 8);
  CHECK(b3.holds);
  CHECK(b3.capacity <= b3.chebyshev_root);
  CHECK(b3.chebyshev_root <= b3.restricted_root + 1e-12);
  CHECK(b3.restricted_root <= b3.zeta_next);
}

TEST_CASE("Fekete counting measures approach equilibrium") {
  const std::vector<int> ns{5, 10, 20, 40};
  const auto ks = fekete_counting_convergence(kAsym, ns);
  REQUIRE(ks.size() == ns.size());
  CHECK(ks.back() <= 0.05);
  CHECK(ks.back() < ks.front());
}

TEST_CASE("Cantor approximant: Fekete constants stay above capacity") {
  const auto e = cantor_approximant(4, 1.0 / 3.0);
  const double cap8 = capacity(cantor_approximant(8, 1.0 / 3.0));
  const auto z = transfinite_diameter(e, 24);
  CHECK(z.back() >= capacity(e) - 1e-9);
  CHECK(z.back() >= cap8 - 0.05);
}

TEST_CASE("argument validation") {
  const auto e = IntervalUnion::normalize({{0.0, 1.0}});
  CHECK_THROWS_AS(chebyshev(e, 0, false), Error);
  CHECK_THROWS_AS(chebyshev(e, 61, false), Error);
  CHECK_THROWS_AS(fekete(e, 1), Error);
  CHECK_THROWS_AS(fekete(e, 201), Error);
  const std::vector<double> one{0.5};
  CHECK_THROWS_AS(fekete_constant(one), Error);
}

TEST_CASE("monic_from_roots") {
  const std::vector<double> roots{1.0, -2.0, 0.5};
  const auto c = monic_from_roots(roots);
  REQUIRE(c.size() == 4);
  for (double x : {-3.0, 0.0, 0.7, 2.0}) {
    CHECK(horner(c, x) == doctest::Approx((x - 1.0) * (x + 2.0) * (x - 0.5)));
  }
}
