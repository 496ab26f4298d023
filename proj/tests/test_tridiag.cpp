#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "logpot/tridiag.hpp"

using namespace logpot;

namespace {

std::vector<double> dense_oracle(const std::vector<double>& d, const std::vector<double>& e) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = e[static_cast<std::size_t>(i)];
    m(i + 1, i) = e[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

}  // namespace

TEST_CASE("free Jacobi matrix eigenvalues are 2cos(k pi/(n+1))") {
  for (std::size_t n : {1u, 2u, 3u, 10u, 257u}) {
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n - 1, 1.0);
    const auto ev = tridiagonal_eigenvalues(d, e);
    REQUIRE(ev.size() == n);
    for (std::size_t k = 0; k < n; ++k) {
      const double want = 2.0 * std::cos(std::numbers::pi * static_cast<double>(n - k) / static_cast<double>(n + 1));
      CHECK(std::abs(ev[k] - want) <= 1e-13);
    }
  }
}

TEST_CASE("random tridiagonal matrices against a dense solver") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(trial) * 7;
    std::vector<double> d(n);
    std::vector<double> e(n - 1);
    for (auto& v : d) v = 3 * u(rng);
    for (auto& v : e) v = 0.05 + std::abs(u(rng));
    const auto ev = tridiagonal_eigenvalues(d, e);
    const auto ref = dense_oracle(d, e);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(ev[k] - ref[k]) <= 1e-12);
  }
}

TEST_CASE("Wilkinson matrix with close eigenvalue pairs") {
  const std::size_t n = 21;
  std::vector<double> d(n);
  std::vector<double> e(n - 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = std::abs(10.0 - static_cast<double>(i));
  const auto ev = tridiagonal_eigenvalues(d, e);
  const auto ref = dense_oracle(d, e);
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(ev[k] - ref[k]) <= 1e-12);
  // The top pair agrees to about 1e-14 but must still be returned twice.
  CHECK(ev[n - 1] - ev[n - 2] >= 0.0);
}

TEST_CASE("graded off-diagonals") {
  const std::size_t n = 30;
  std::vector<double> d(n);
  std::vector<double> e(n - 1);
  for (std::size_t i = 0; i < n; ++i) d[i] = std::exp(-0.3 * static_cast<double>(i));
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = std::exp(-0.5 * static_cast<double>(i));
  const auto ev = tridiagonal_eigenvalues(d, e);
  const auto ref = dense_oracle(d, e);
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(ev[k] - ref[k]) <= 1e-13);
}

TEST_CASE("Sturm count") {
  std::vector<double> d(5, 0.0);
  std::vector<double> esq(4, 1.0);
  CHECK(sturm_count(d, esq, -3.0) == 0);
  CHECK(sturm_count(d, esq, 0.5) == 3);
  CHECK(sturm_count(d, esq, 3.0) == 5);
}

TEST_CASE("QR eigenvalues agree with bisection") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 300;
  std::vector<double> d(n), e(n - 1);
  for (auto& x : d) x = u(rng);
  for (auto& x : e) x = 0.5 + 0.5 * u(rng);
  const auto a = tridiagonal_eigenvalues(d, e);
  const auto b = tridiagonal_eigenvalues_qr(d, e);
  REQUIRE(b.size() == n);
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-13);
  CHECK(tridiagonal_eigenvalues_qr(std::vector<double>{}, std::vector<double>{}).empty());
}
