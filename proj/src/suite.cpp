#include "logpot/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "logpot/chebfek.hpp"
#include "logpot/ergodic.hpp"
#include "logpot/error.hpp"
#include "logpot/oprl.hpp"
#include "logpot/opuc.hpp"
#include "logpot/potential.hpp"

namespace logpot::suite {

namespace {

constexpr double kPi = std::numbers::pi;
using io::fmt;

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Union of 1..max_pieces intervals inside [-3, 3].
IntervalUnion random_set(std::mt19937_64& rng, int max_pieces = 4) {
  std::uniform_int_distribution<int> count(1, max_pieces);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = count(rng);
  std::vector<double> cuts(2 * static_cast<std::size_t>(k));
  for (auto& c : cuts) c = -3.0 + 6.0 * u(rng);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> raw;
  for (int i = 0; i < k; ++i) {
    const double a = cuts[2 * static_cast<std::size_t>(i)];
    double b = cuts[2 * static_cast<std::size_t>(i) + 1];
    if (b - a < 0.05) b = a + 0.05;
    raw.emplace_back(a, b);
  }
  return IntervalUnion::normalize(raw);
}

// Every interval of e shrunk at random, some dropped.
IntervalUnion random_subset(std::mt19937_64& rng, const IntervalUnion& e) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> raw;
  for (const auto& iv : e.intervals()) {
    if (!raw.empty() && u(rng) < 0.3) continue;
    raw.emplace_back(iv.lo + 0.4 * u(rng) * iv.length(), iv.hi - 0.4 * u(rng) * iv.length());
  }
  if (raw.empty()) raw.emplace_back(e[0].lo, e[0].hi);
  return IntervalUnion::normalize(raw);
}

MeasureSpec semicircle() {
  MeasureSpec s;
  s.ac_components.push_back(
      {{-2.0, 2.0}, [](double x) { return std::sqrt(4.0 - x * x) / (2.0 * kPi); }, EndpointSingularity::Both});
  return s;
}

MeasureSpec arcsine() {
  MeasureSpec s;
  s.ac_components.push_back(
      {{-2.0, 2.0}, [](double x) { return 1.0 / (kPi * std::sqrt(4.0 - x * x)); }, EndpointSingularity::Both});
  return s;
}

double arcsine_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + std::asin(0.5 * x) / kPi;
}

// Fractional parts of j (sqrt 5 - 1) / 2: well-spread atom positions in [0, 1).
std::vector<double> golden_nodes(int count) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<double> x;
  for (int j = 1; j <= count; ++j) {
    const double t = j * phi;
    x.push_back(t - std::floor(t));
  }
  return x;
}

struct Row {
  bool pass{false};
  std::string measured;
  std::string target;
};

Row row1(double scale) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) b = a + 1e-3;
    const double c = scale * capacity(IntervalUnion::normalize({{a, b}}));
    worst = std::max(worst, std::abs(c - (b - a) / 4.0));
  }
  return {worst <= 1e-8, "max |C - (b-a)/4| = " + short_num(worst), "<= 1e-8"};
}

Row row2(double scale) {
  const auto eq = equilibrium(IntervalUnion::normalize({{-2.0, 2.0}}));
  const double c = scale * eq.capacity();
  const double d = eq.density(0.0);
  const bool ok = std::abs(c - 1.0) <= 1e-8 && std::abs(d - 1.0 / (2.0 * kPi)) <= 1e-8;
  return {ok, "C = " + fmt(c) + ", density(0) = " + fmt(d), "C = 1, density(0) = 1/(2 pi), within 1e-8"};
}

Row row3(double scale) {
  double worst_cap = 0.0, worst_zeta = 0.0;
  std::string zetas;
  for (double k : {0.2, 0.5, 0.8}) {
    const auto e = IntervalUnion::normalize({{-1.0, -k}, {k, 1.0}});
    const double want = std::sqrt(1.0 - k * k) / 2.0;
    worst_cap = std::max(worst_cap, std::abs(scale * capacity(e) - want));
    const double z60 = fekete(e, 60).zeta;
    worst_zeta = std::max(worst_zeta, std::abs(z60 - want));
    zetas += (zetas.empty() ? "" : "/") + short_num(z60);
  }
  const bool ok = worst_cap <= 1e-6 && worst_zeta <= 1e-2;
  return {ok,
          "max capacity error " + short_num(worst_cap) + "; zeta_60 = " + zetas + ", max |zeta_60 - C| = " +
              short_num(worst_zeta),
          "capacity within 1e-6; zeta_60 within 1e-2"};
}

Row row4(double scale) {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  int strict_fail = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const IntervalUnion e = random_set(rng);
    const auto eq = equilibrium(e);
    const double level = -std::log(scale * eq.capacity());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      const auto& iv = e[static_cast<std::size_t>(k) % e.size()];
      const double x = iv.lo + (0.001 + 0.998 * u(rng)) * iv.length();
      worst = std::max(worst, std::abs(eq.potential(x) - level));
    }
    int drawn = 0;
    while (drawn < 50) {
      const Complex z(e.hull().lo - 1.0 + (e.hull().length() + 2.0) * u(rng), (u(rng) - 0.5) * 2.0);
      if (z.imag() == 0.0 && e.contains(z.real())) continue;
      ++drawn;
      if (!(eq.potential(z) < level)) ++strict_fail;
    }
  }
  return {worst <= 1e-6 && strict_fail == 0,
          "max |Phi - (-log C)| on E = " + short_num(worst) + ", exterior violations = " + std::to_string(strict_fail),
          "<= 1e-6 on E, 0 violations off E"};
}

Row row5() {
  std::mt19937_64 rng(8);
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const IntervalUnion big = random_set(rng);
    const IntervalUnion small = random_subset(rng, big);
    if (!small.is_subset_of(big)) ++violations;
    const auto eb = equilibrium(big);
    const auto es = equilibrium(small);
    if (es.capacity() > eb.capacity() * (1 + 1e-12)) ++violations;
    if (eb.capacity() < big.lebesgue() / 4 * (1 - 1e-12)) ++violations;
    if (es.capacity() < small.lebesgue() / 4 * (1 - 1e-12)) ++violations;
    for (Complex z : {Complex(4, 0), Complex(0, 1), Complex(big.hull().mid(), 0.1), Complex(-3.5, -2)}) {
      if (eb.green(z) > es.green(z) + 1e-8) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over 200 pairs", "0 violations"};
}

Row row6() {
  const std::vector<IntervalUnion> sets{IntervalUnion::normalize({{-2.0, 2.0}}),
                                        IntervalUnion::normalize({{0.0, 1.0}}),
                                        IntervalUnion::normalize({{-1.3, -0.4}, {0.1, 0.9}})};
  int broken = 0, non_monotone = 0;
  for (const auto& e : sets) {
    for (int n = 1; n <= 30; ++n) {
      if (!bounds_chain(e, n).holds) ++broken;
    }
    const auto z = transfinite_diameter(e, 31);
    for (std::size_t k = 1; k < z.size(); ++k) {
      if (z[k] > z[k - 1] * (1 + 1e-12)) ++non_monotone;
    }
  }
  return {broken == 0 && non_monotone == 0,
          std::to_string(broken) + " chain failures, " + std::to_string(non_monotone) + " zeta increases",
          "C <= ||T_n||^{1/n} <= ||T_n^R||^{1/n} <= zeta_{n+1} for n <= 30; zeta_n decreasing"};
}

Row row7() {
  const auto e = IntervalUnion::normalize({{-2.0, 2.0}});
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) worst = std::max(worst, std::abs(chebyshev(e, n, false).sup_norm - 2.0));
  const auto e1 = IntervalUnion::normalize({{-1.0, 1.0}});
  const double s = std::sqrt(3.0 / 7.0);
  const std::vector<double> l3{-1.0, 0.0, 1.0}, l5{-1.0, -s, 0.0, s, 1.0};
  double lob = 0.0;
  const auto f3 = fekete(e1, 3).points;
  const auto f5 = fekete(e1, 5).points;
  for (std::size_t i = 0; i < 3; ++i) lob = std::max(lob, std::abs(f3[i] - l3[i]));
  for (std::size_t i = 0; i < 5; ++i) lob = std::max(lob, std::abs(f5[i] - l5[i]));
  return {worst <= 1e-6 && lob <= 1e-8,
          "max | ||T_n|| - 2 | = " + short_num(worst) + ", max Lobatto error = " + short_num(lob),
          "<= 1e-6 and <= 1e-8"};
}

Row row8() {
  const auto js = jacobi_from_measure(discretize(semicircle(), 64), 20);
  const auto ja = jacobi_from_measure(discretize(arcsine(), 64), 20);
  double worst = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    worst = std::max({worst, std::abs(js.a[k] - 1.0), std::abs(js.b[k]), std::abs(ja.b[k]),
                      std::abs(ja.a[k] - (k == 0 ? std::sqrt(2.0) : 1.0))});
  }
  const auto z = zero_counting(free_jacobi(2000), 2000);
  const std::vector<double> w(z.points.size(), 1.0);
  const double ks = ks_distance(z.points, w, arcsine_cdf);
  return {worst <= 1e-8 && ks <= 0.02,
          "max parameter error " + short_num(worst) + ", free zero-counting KS = " + short_num(ks),
          "<= 1e-8, KS <= 0.02"};
}

Row row9() {
  const std::size_t n = 10000;
  const std::vector<std::size_t> ns{100, 1000, 10000};
  const auto e = IntervalUnion::normalize({{-2.0, 2.0}});
  const auto free = regularity_diagnostic(free_jacobi(n), e, ns);
  const auto sparse = regularity_diagnostic(sparse_perturbation_jacobi(n), e, ns);
  const auto rs = regularity_diagnostic(random_sign_jacobi(n, 1), e, ns);
  const auto bl = regularity_diagnostic(block_jacobi(n), IntervalUnion::normalize({{-2.0, 3.0}}), ns);
  const double exact = std::pow(2.0, -std::floor(std::sqrt(static_cast<double>(n))) / static_cast<double>(n));
  const double sparse_err = std::abs(sparse.gamma_n.back() - exact);
  double rs_dev = 0.0;
  for (double g : rs.gamma_n) rs_dev = std::max(rs_dev, std::abs(g - 0.5));
  const bool ok = free.verdict == Verdict::Regular && sparse.verdict == Verdict::Regular && sparse_err <= 1e-12 &&
                  rs.verdict == Verdict::NotRegular && rs_dev <= 1e-12 && std::abs(rs.capacity - 1.0) <= 1e-8 &&
                  bl.verdict == Verdict::NotRegular && std::abs(bl.capacity - 1.25) <= 1e-8;
  std::string m = std::string("free ") + verdict_name(free.verdict) + "; sparse " + verdict_name(sparse.verdict) +
                  " (Gamma_1e4 error " + short_num(sparse_err) + "); random sign " + verdict_name(rs.verdict) +
                  " (Gamma = " + short_num(rs.gamma_n.back()) + ", C = " + short_num(rs.capacity) + "); block " +
                  verdict_name(bl.verdict) + " (Gamma = " + short_num(bl.gamma_n.back()) +
                  ", C = " + short_num(bl.capacity) + ")";
  return {ok, m, "regular, regular, not_regular, not_regular"};
}

Row row10() {
  MeasureSpec sum = arcsine();
  sum.ac_components.push_back(semicircle().ac_components.front());
  const auto j = jacobi_from_measure(discretize_for_degree(sum, 200), 200);
  const std::vector<std::size_t> ns{50, 100, 200};
  const auto rep = regularity_diagnostic(j, IntervalUnion::normalize({{-2.0, 2.0}}), ns);
  return {rep.verdict == Verdict::Regular,
          std::string(verdict_name(rep.verdict)) + " (Gamma_200 = " + short_num(rep.gamma_n.back()) + ")", "regular"};
}

Row row11() {
  const auto mu = to_measure(dyadic_atoms(0.1));
  const auto e01 = IntervalUnion::normalize({{0.0, 1.0}});
  const double l5 = stahl_totik_scan(mu, e01, 64, 5.0).bad_length;
  const double l1 = stahl_totik_scan(mu, e01, 64, 1.0).bad_length;
  return {l5 == 0.0 && l1 > 0.0, "length(eta=5) = " + fmt(l5) + ", length(eta=1) = " + fmt(l1),
          "0 for eta = 5, > 0 for eta = 1"};
}

Row row12() {
  LogAtoms atoms;
  atoms.nodes = golden_nodes(60);
  for (int j = 1; j <= 60; ++j) atoms.log_weights.push_back(-static_cast<double>(j) * j);
  int violations = 0;
  double root = 1.0, bound_root = 1.0, prev_bound = 1.0;
  bool bound_decreasing = true;
  for (std::size_t n = 1; n <= 30; ++n) {
    const double got = log_monic_norm(atoms, n);
    const double bound = pure_point_bound(atoms, n).log_bound;
    if (got > bound + 1e-12) ++violations;
    // The norms themselves need not decrease monotonically; the bound does.
    root = std::exp(got / static_cast<double>(n));
    bound_root = std::exp(bound / static_cast<double>(n));
    if (!(bound_root < prev_bound)) bound_decreasing = false;
    prev_bound = bound_root;
  }
  return {violations == 0 && bound_decreasing && root < 1e-7,
          std::to_string(violations) + " bound violations, ||P_30||^{1/30} = " + short_num(root) + " <= bound " +
              short_num(bound_root) + (bound_decreasing ? ", bound decreasing" : ", bound not decreasing"),
          "||P_n||^{1/n} <= d (sum_{j>n} a_j)^{1/2n} for n <= 30, bound decreasing toward 0"};
}

Row row13() {
  const auto f = ErgodicFamily::free_family();
  const std::vector<Complex> zs{3.0, Complex(2.0, 1.0), Complex(0.0, 5.0)};
  const auto r = thouless_check(f, zs, 10000, 1);
  const double g3 = lyapunov(f, 3.0, 10000, 1).gamma;
  const double err = std::abs(g3 - std::log((3.0 + std::sqrt(5.0)) / 2.0));
  return {r.max_residual <= 5e-3 && err <= 1e-3,
          "max Thouless residual " + short_num(r.max_residual) + ", gamma(3) = " + fmt(g3),
          "residual <= 5e-3, gamma(3) = log((3+sqrt 5)/2) within 1e-3"};
}

Row row14() {
  const auto f = ErgodicFamily::almost_mathieu(4.0, golden_frequency(), 0.0);
  const auto dos = density_of_states(f, 2000, 16);
  double worst = 0.0;
  std::string gammas;
  for (double level : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double x = dos.nodes[static_cast<std::size_t>(level * static_cast<double>(dos.size()))];
    const double g = lyapunov(f, Complex(x, 1e-4), 100000, 16).gamma;
    worst = std::max(worst, std::abs(g - std::log(2.0)));
    gammas += (gammas.empty() ? "" : "/") + short_num(g);
  }
  const auto e = estimate_spectrum(dos, 2000, 16);
  const auto id = regularity_identity_check(f, e, 10000, 16);
  return {worst <= 5e-2 && id.residual <= 5e-2,
          "gamma = " + gammas + " (max |gamma - log 2| " + short_num(worst) + "); Gamma_n = " + short_num(id.gamma_n) +
              ", C(E) exp(-mean gamma) = " + short_num(id.rhs) + " with C(E) = " + short_num(id.capacity) +
              " on " + std::to_string(e.size()) + " intervals",
          "|gamma - log 2| <= 5e-2, |residual| <= 5e-2"};
}

Row row15() {
  const auto r = rotation_opuc_check(RadialLaw{0.5}, 1000, 64, 7);
  const double dev = std::abs(r.product_root - r.target_full);
  return {dev <= 3.0 * r.std_error && r.angle_ks <= 0.05,
          "product root " + short_num(r.product_root) + " +- " + short_num(r.std_error) + " (|diff| = " +
              short_num(dev / r.std_error) + " stderr; exp(1/2 int log(1-|z|^2)) = " + short_num(r.target_half) +
              "), angle KS " + short_num(r.angle_ks),
          "exp(int log(1-|z|^2) d sigma_0) = " + short_num(r.target_full) + " within 3 stderr, KS <= 0.05"};
}

Row row16() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto z = opuc_zeros(random_verblunsky(32, 0.3, seed), 32);
    const auto lhs = balayage_moments(balayage(z, balayage_grid_for(z, 8, 1e-10)), 8);
    const auto rhs = point_moments(z, 8);
    for (std::size_t k = 0; k <= 8; ++k) worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
  }
  return {worst <= 1e-8, "max moment error " + short_num(worst), "<= 1e-8 for k <= 8"};
}

Row row17() {
  std::vector<IntervalUnion> seq;
  for (int n = 1; n <= 8; ++n) seq.push_back(cantor_approximant(n, 1.0 / 3.0));
  const auto caps = equilibrium_limit(seq).capacities;
  bool decreasing = true;
  for (std::size_t k = 1; k < caps.size(); ++k) decreasing = decreasing && caps[k] < caps[k - 1];
  const double last_gap = caps[6] - caps[7];
  return {decreasing && last_gap <= 1e-3 && caps.back() > 0.1,
          std::string(decreasing ? "decreasing" : "not decreasing") + ", C_7 - C_8 = " + short_num(last_gap) +
              ", C_8 = " + fmt(caps.back()),
          "strictly decreasing, gap <= 1e-3, limit > 0.1"};
}

struct Spec {
  int id;
  const char* title;
  double limit;
  std::function<Row(const SuiteOptions&)> run;
};

std::vector<Spec> criteria() {
  return {
      {1, "capacity of random intervals", 1.0, [](const SuiteOptions& o) { return row1(o.capacity_scale); }},
      {2, "capacity and density of [-2,2]", 1.0, [](const SuiteOptions& o) { return row2(o.capacity_scale); }},
      {3, "symmetric two-interval capacity", 30.0, [](const SuiteOptions& o) { return row3(o.capacity_scale); }},
      {4, "Frostman suite", 60.0, [](const SuiteOptions& o) { return row4(o.capacity_scale); }},
      {5, "comparison suite on nested pairs", 60.0, [](const SuiteOptions&) { return row5(); }},
      {6, "bounds chain", 300.0, [](const SuiteOptions&) { return row6(); }},
      {7, "Chebyshev norms and Lobatto points", 60.0, [](const SuiteOptions&) { return row7(); }},
      {8, "OPRL round trip and free zero counting", 60.0, [](const SuiteOptions&) { return row8(); }},
      {9, "regularity verdicts", 120.0, [](const SuiteOptions&) { return row9(); }},
      {10, "sum of two regular measures", 60.0, [](const SuiteOptions&) { return row10(); }},
      {11, "Stahl-Totik scan on the dyadic measure", 60.0, [](const SuiteOptions&) { return row11(); }},
      {12, "pure point bound with a_j = exp(-j^2)", 30.0, [](const SuiteOptions&) { return row12(); }},
      {13, "Thouless formula, free family", 120.0, [](const SuiteOptions&) { return row13(); }},
      {14, "almost Mathieu exponent and regularity gap", 600.0, [](const SuiteOptions&) { return row14(); }},
      {15, "rotation-invariant OPUC", 120.0, [](const SuiteOptions&) { return row15(); }},
      {16, "balayage moment identity", 10.0, [](const SuiteOptions&) { return row16(); }},
      {17, "Cantor capacity chain", 300.0, [](const SuiteOptions&) { return row17(); }},
  };
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const SuiteOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.time_limit = c.limit;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Row row = c.run(options);
      r.pass = row.pass;
      r.measured = row.measured;
      r.target = row.target;
    } catch (const Error& e) {
      r.pass = false;
      r.measured = std::string("error ") + error_code_name(e.code()) + ": " + e.what();
      r.target = "no error";
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.time_limit) r.pass = false;
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[32], tail[64];
  std::snprintf(head, sizeof head, "%s %2d  ", r.pass ? "PASS" : "FAIL", r.id);
  std::snprintf(tail, sizeof tail, " | %.2f s (limit %g s)", r.seconds, r.time_limit);
  return head + r.title + " | measured " + r.measured + " | target " + r.target + tail;
}

io::Json regression_values() {
  using io::Json;
  Json j = Json::object();

  Json caps = Json::object();
  caps["[0,1]"] = capacity(IntervalUnion::normalize({{0.0, 1.0}}));
  caps["[-2,2]"] = capacity(IntervalUnion::normalize({{-2.0, 2.0}}));
  for (double k : {0.2, 0.5, 0.8}) {
    caps["[-1,-" + short_num(k) + "]u[" + short_num(k) + ",1]"] =
        capacity(IntervalUnion::normalize({{-1.0, -k}, {k, 1.0}}));
  }
  caps["[-1,-0.3]u[0.2,1]u[1.4,1.6]"] = capacity(IntervalUnion::normalize({{-1, -0.3}, {0.2, 1}, {1.4, 1.6}}));
  j["capacity"] = caps;

  Json cantor = Json::array();
  for (int n = 1; n <= 8; ++n) cantor.push_back(capacity(cantor_approximant(n, 1.0 / 3.0)));
  j["cantor_capacity"] = cantor;

  const auto asym = IntervalUnion::normalize({{-1.0, -0.3}, {0.2, 1.0}});
  const auto eq = equilibrium(asym);
  j["asym_gap_zero"] = eq.gap_zeros().front();
  j["asym_green_at_2"] = eq.green(2.0);
  j["asym_chebyshev_norm_8"] = chebyshev(asym, 8, false).sup_norm;
  j["asym_restricted_norm_8"] = chebyshev(asym, 8, true).sup_norm;
  j["asym_zeta_12"] = fekete(asym, 12).zeta;
  j["zeta_60_two_interval"] = Json::array({fekete(IntervalUnion::normalize({{-1.0, -0.2}, {0.2, 1.0}}), 60).zeta,
                                           fekete(IntervalUnion::normalize({{-1.0, -0.5}, {0.5, 1.0}}), 60).zeta,
                                           fekete(IntervalUnion::normalize({{-1.0, -0.8}, {0.8, 1.0}}), 60).zeta});

  const auto mu = to_measure(dyadic_atoms(0.1));
  Json st = Json::array();
  for (double eta : {1.0, 2.0, 4.0, 5.0}) {
    st.push_back(stahl_totik_scan(mu, IntervalUnion::normalize({{0.0, 1.0}}), 64, eta).bad_length);
  }
  j["stahl_totik_y0.1_m64"] = st;

  const auto rs = regularity_diagnostic(random_sign_jacobi(1000, 1), IntervalUnion::normalize({{-2.0, 2.0}}),
                                        std::vector<std::size_t>{100, 1000});
  j["random_sign_ks_1000"] = rs.ks_distance.back();

  j["anderson_dos_ks"] = ks_distance(density_of_states(ErgodicFamily::anderson(-1.0, 1.0, 42), 2000, 32), arcsine_cdf);
  j["free_gamma_3"] = lyapunov(ErgodicFamily::free_family(), 3.0, 10000, 1).gamma;
  j["almost_mathieu_gamma_0"] =
      lyapunov(ErgodicFamily::almost_mathieu(4.0, golden_frequency(), 0.0), Complex(0.0, 1e-4), 10000, 16).gamma;

  std::vector<cplx> wavy(12);
  for (std::size_t k = 0; k < wavy.size(); ++k) {
    wavy[k] = 0.8 * std::sin(static_cast<double>(k) + 1.0) * std::polar(1.0, 0.7 * static_cast<double>(k));
  }
  j["opuc_norm_product_12"] = verblunsky_norm_product(VerblunskyParams::from(wavy), 12);
  const auto rot = rotation_opuc_check(RadialLaw{0.5}, 1000, 64, 7);
  j["rotation_product_root"] = rot.product_root;
  j["rotation_angle_ks"] = rot.angle_ks;
  return j;
}

RegressionOutcome compare_regression(const std::string& golden_path) {
  RegressionOutcome out;
  std::ifstream in(golden_path, std::ios::binary);
  if (!in) {
    out.differences.push_back("cannot read " + golden_path);
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  const io::Json now = regression_values();
  const std::string text = io::dump(now);
  out.identical = text == ss.str();
  if (out.identical) return out;
  io::Json golden;
  try {
    golden = io::Json::parse(ss.str());
  } catch (const io::Json::parse_error&) {
    out.differences.push_back("golden file is not valid JSON");
    return out;
  }
  for (const auto& [key, value] : now.items()) {
    if (!golden.contains(key)) {
      out.differences.push_back(key + ": missing from golden file");
    } else if (io::dump(golden[key]) != io::dump(value)) {
      std::string g = io::dump(golden[key]), v = io::dump(value);
      g.pop_back();
      v.pop_back();
      out.differences.push_back(key + ": golden " + g + ", now " + v);
    }
  }
  for (const auto& [key, value] : golden.items()) {
    (void)value;
    if (!now.contains(key)) out.differences.push_back(key + ": no longer produced");
  }
  if (out.differences.empty()) out.differences.push_back("formatting differs");
  return out;
}

void update_regression(const std::string& golden_path) { io::write_atomic(golden_path, io::dump(regression_values())); }

}  // namespace logpot::suite
