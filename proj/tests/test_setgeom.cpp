#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "logpot/error.hpp"
#include "logpot/setgeom.hpp"

using namespace logpot;

namespace {

bool same(const IntervalUnion& e, std::initializer_list<std::pair<double, double>> want, double tol = 1e-15) {
  if (e.size() != want.size()) return false;
  std::size_t i = 0;
  for (const auto& [a, b] : want) {
    if (std::abs(e[i].lo - a) > tol || std::abs(e[i].hi - b) > tol) return false;
    ++i;
  }
  return true;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::BadInput;
}

}  // namespace

TEST_CASE("normalize keeps, merges and sorts") {
  CHECK(same(IntervalUnion::normalize({{0, 1}}), {{0, 1}}));
  CHECK(same(IntervalUnion::normalize({{2, 3}, {0, 1}, {0.5, 2.2}}), {{0, 3}}));
  CHECK(same(IntervalUnion::normalize({{-2, 0}, {0, 2}}), {{-2, 2}}));
  CHECK(same(IntervalUnion::normalize({{3, 4}, {0, 1}}), {{0, 1}, {3, 4}}));
  // Noise below the merge tolerance closes a gap.
  CHECK(same(IntervalUnion::normalize({{0, 1}, {1 + 1e-13, 2}}), {{0, 2}}));
}

TEST_CASE("normalize rejects bad input") {
  CHECK(code_of([] { IntervalUnion::normalize(std::span<const std::pair<double, double>>{}); }) ==
        ErrorCode::EmptySet);
  CHECK(code_of([] { IntervalUnion::normalize({{1, 0}}); }) == ErrorCode::MalformedInterval);
  CHECK(code_of([] { IntervalUnion::normalize({{0.5, 0.5}}); }) == ErrorCode::MalformedInterval);
  CHECK(code_of([] { IntervalUnion::normalize({{0, NAN}}); }) == ErrorCode::MalformedInterval);
}

TEST_CASE("normalize is idempotent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, double>> raw;
    for (int k = 0; k < 6; ++k) {
      const double a = u(rng);
      raw.emplace_back(a, a + std::abs(u(rng)) * 0.3 + 1e-3);
    }
    const IntervalUnion e = IntervalUnion::normalize(raw);
    std::vector<std::pair<double, double>> again;
    for (const auto& iv : e.intervals()) again.emplace_back(iv.lo, iv.hi);
    CHECK(IntervalUnion::normalize(again) == e);
    for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i - 1].hi < e[i].lo);
  }
}

TEST_CASE("lebesgue measure") {
  CHECK(IntervalUnion::normalize({{0, 1}}).lebesgue() == doctest::Approx(1.0));
  CHECK(IntervalUnion::normalize({{-2, 2}}).lebesgue() == doctest::Approx(4.0));
  CHECK(IntervalUnion::normalize({{0, 1.0 / 3}, {2.0 / 3, 1}}).lebesgue() == doctest::Approx(2.0 / 3).epsilon(1e-15));
}

TEST_CASE("scale_translate") {
  CHECK(same(IntervalUnion::normalize({{0, 1}}).scale_translate(4, -2), {{-2, 2}}));
  CHECK(same(IntervalUnion::normalize({{-1, 1}}).scale_translate(1, 0), {{-1, 1}}));
  CHECK(same(IntervalUnion::normalize({{0, 1}, {2, 3}}).scale_translate(2, 1), {{1, 3}, {5, 7}}));
  CHECK(code_of([] { IntervalUnion::normalize({{0, 1}}).scale_translate(0, 1); }) == ErrorCode::BadScale);
  CHECK(code_of([] { IntervalUnion::normalize({{0, 1}}).scale_translate(-1, 1); }) == ErrorCode::BadScale);

  const IntervalUnion e = IntervalUnion::normalize({{-1, -0.3}, {0.2, 1}, {1.5, 2.25}});
  const IntervalUnion f = e.scale_translate(3.7, -0.4);
  CHECK(std::abs(f.lebesgue() - 3.7 * e.lebesgue()) <= 1e-14 * f.lebesgue());
}

TEST_CASE("cantor approximants") {
  CHECK(same(cantor_approximant(0, 1.0 / 3), {{0, 1}}));
  CHECK(same(cantor_approximant(1, 1.0 / 3), {{0, 1.0 / 3}, {2.0 / 3, 1}}));
  CHECK(same(cantor_approximant(2, 1.0 / 3), {{0, 1.0 / 9}, {2.0 / 9, 1.0 / 3}, {2.0 / 3, 7.0 / 9}, {8.0 / 9, 1}},
             1e-15));
  CHECK(code_of([] { cantor_approximant(2, 0.5); }) == ErrorCode::BadRatio);
  CHECK(code_of([] { cantor_approximant(2, 0.0); }) == ErrorCode::BadRatio);
  CHECK(code_of([] { cantor_approximant(21, 0.3); }) == ErrorCode::BadInput);

  for (double r : {0.2, 1.0 / 3, 0.45}) {
    for (int n = 0; n < 10; ++n) {
      const IntervalUnion e = cantor_approximant(n, r);
      const IntervalUnion f = cantor_approximant(n + 1, r);
      CHECK(e.size() == (1u << n));
      CHECK(f.is_subset_of(e));
      CHECK(e.lebesgue() == doctest::Approx(std::pow(2 * r, n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("locate and hull") {
  const IntervalUnion e = IntervalUnion::normalize({{0, 1}, {2, 3}});
  CHECK(e.locate(0.5) == 0);
  CHECK(e.locate(2.0) == 1);
  CHECK(e.locate(1.5) == 2);
  CHECK(e.contains(3.0));
  CHECK_FALSE(e.contains(3.1));
  CHECK(e.hull() == Interval{0, 3});
  CHECK(e.gap(0) == Interval{1, 2});
}
