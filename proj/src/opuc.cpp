#include "logpot/opuc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "logpot/error.hpp"
#include "logpot/parallel.hpp"

namespace logpot {

namespace {

void require_degree(const VerblunskyParams& v, std::size_t n) {
  if (n > v.size()) {
    throw Error(ErrorCode::BadInput, "degree " + std::to_string(n) + " exceeds " +
                                         std::to_string(v.size()) + " Verblunsky coefficients");
  }
}

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

VerblunskyParams VerblunskyParams::from(std::vector<cplx> alpha) {
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    const double m = std::abs(alpha[j]);
    if (!(m < 1.0)) {
      throw Error(ErrorCode::BadInput, "Verblunsky coefficient " + std::to_string(j) + " has modulus >= 1");
    }
  }
  return VerblunskyParams{std::move(alpha)};
}

double VerblunskyParams::rho(std::size_t j) const { return std::exp(log_rho(j)); }

double VerblunskyParams::log_rho(std::size_t j) const {
  return 0.5 * std::log1p(-std::norm(alpha[j]));
}

VerblunskyParams random_verblunsky(std::size_t n, double max_abs, std::uint64_t seed) {
  if (!(max_abs >= 0.0 && max_abs < 1.0)) throw Error(ErrorCode::BadInput, "max_abs must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  std::vector<cplx> a(n);
  for (auto& z : a) {
    const double r = max_abs * std::sqrt(unit_double(rng));
    const double t = 2.0 * std::numbers::pi * unit_double(rng);
    z = std::polar(r, t);
  }
  return VerblunskyParams{std::move(a)};
}

std::pair<cplx, cplx> szego_eval(const VerblunskyParams& v, std::size_t n, cplx z) {
  require_degree(v, n);
  cplx phi = 1.0, star = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = v.alpha[k];
    const cplx next = z * phi - std::conj(a) * star;
    star = star - a * z * phi;
    phi = next;
  }
  return {phi, star};
}

std::vector<cplx> opuc_coefficients(const VerblunskyParams& v, std::size_t n) {
  require_degree(v, n);
  std::vector<cplx> c{1.0};
  for (std::size_t k = 0; k < n; ++k) {
    // Phi_k^* has coefficients conj(c_{k - j}).
    const cplx ab = std::conj(v.alpha[k]);
    std::vector<cplx> next(k + 2, 0.0);
    for (std::size_t j = 0; j <= k; ++j) next[j + 1] += c[j];
    for (std::size_t j = 0; j <= k; ++j) next[j] -= ab * std::conj(c[k - j]);
    c = std::move(next);
  }
  return c;
}

double verblunsky_norm_product(const VerblunskyParams& v, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::BadInput, "verblunsky_norm_product needs n >= 1");
  require_degree(v, n);
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += v.log_rho(j);
  return std::exp(s / static_cast<double>(n));
}

std::vector<cplx> opuc_zeros(const VerblunskyParams& v, std::size_t n) {
  if (n > 128) throw Error(ErrorCode::BadInput, "opuc_zeros supports n <= 128");
  require_degree(v, n);
  if (n == 0) return {};

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double r0 = n > 0 ? std::max(verblunsky_norm_product(v, n), 1e-3) : 1.0;
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    z[k] = std::polar(r0, 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(n));
  }
  std::vector<char> done(n, 0);
  std::vector<double> last(n, std::numeric_limits<double>::infinity());
  std::size_t remaining = n;

  for (int it = 0; it < 5000 && remaining > 0; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      // Phi_n and Phi_n' by the Szego recursion; far better conditioned than
      // the monomial coefficients for zeros near the circle.
      const cplx x = z[k];
      cplx p = 1.0, ps = 1.0, dp = 0.0, dps = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const cplx a = v.alpha[j];
        const cplx np = x * p - std::conj(a) * ps;
        const cplx nps = ps - a * x * p;
        const cplx ndp = p + x * dp - std::conj(a) * dps;
        const cplx ndps = dps - a * (p + x * dp);
        p = np;
        ps = nps;
        dp = ndp;
        dps = ndps;
      }
      if (p == 0.0) {
        done[k] = 1;
        --remaining;
        continue;
      }
      cplx s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) s += 1.0 / (z[k] - z[j]);
      }
      const cplx newton = p / dp;
      const cplx w = newton / (1.0 - newton * s);
      z[k] -= w;
      if (!std::isfinite(z[k].real()) || !std::isfinite(z[k].imag())) {
        throw Error(ErrorCode::SolveFailed, "Aberth iteration diverged");
      }
      // Done once the correction is at rounding level or has stopped
      // shrinking after getting small (noise floor of a clustered zero).
      const double aw = std::abs(w);
      const bool stalled = aw < 1e-9 && aw >= last[k];
      last[k] = aw;
      if (aw <= 4.0 * eps * std::max(std::abs(z[k]), 0.25) || stalled) {
        done[k] = 1;
        --remaining;
      }
    }
  }
  if (remaining > 0) throw Error(ErrorCode::SolveFailed, "Aberth iteration did not converge");
  for (auto& r : z) {
    const double m = std::abs(r);
    if (m < 1.0) continue;
    if (m > 1.0 + 1e-12) throw Error(ErrorCode::SolveFailed, "computed zero outside the open unit disk");
    double rad = 1.0 - 0x1.0p-53;
    do {
      r = std::polar(rad, std::arg(r));
      rad -= 0x1.0p-53;
    } while (!(std::abs(r) < 1.0));
  }
  std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
    const double ta = std::arg(a), tb = std::arg(b);
    if (ta != tb) return ta < tb;
    return std::abs(a) < std::abs(b);
  });
  return z;
}

Balayage balayage(std::span<const cplx> points, std::size_t grid) {
  if (points.empty()) throw Error(ErrorCode::BadInput, "balayage of an empty point set");
  if (grid == 0) throw Error(ErrorCode::BadInput, "balayage grid must be positive");
  for (const auto& z : points) {
    if (!(std::abs(z) < 1.0)) throw Error(ErrorCode::BadSupport, "balayage point on or outside the unit circle");
  }
  Balayage b;
  b.theta.resize(grid);
  b.density.assign(grid, 0.0);
  const double inv = 1.0 / static_cast<double>(points.size());
  parallel_for(grid, [&](std::size_t m) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(grid);
    const cplx e = std::polar(1.0, t);
    double f = 0.0;
    for (const auto& z : points) f += (1.0 - std::norm(z)) / std::norm(e - z);
    b.theta[m] = t;
    b.density[m] = f * inv;
  });
  return b;
}

std::size_t balayage_grid_for(std::span<const cplx> points, int kmax, double tol, std::size_t min_grid) {
  if (!(tol > 0.0 && tol < 1.0)) throw Error(ErrorCode::BadInput, "tolerance must lie in (0, 1)");
  double r = 0.0;
  for (const auto& z : points) r = std::max(r, std::abs(z));
  if (!(r < 1.0)) throw Error(ErrorCode::BadSupport, "balayage point on or outside the unit circle");
  std::size_t grid = std::max<std::size_t>(min_grid, 1);
  if (r == 0.0) return grid;
  // r^(M - kmax) <= tol  <=>  M >= kmax + log(tol) / log(r).
  const double need = static_cast<double>(std::max(kmax, 0)) + std::log(tol) / std::log(r);
  if (need > 0x1.0p40) throw Error(ErrorCode::NumericalFailure, "points too close to the circle for a grid quadrature");
  while (static_cast<double>(grid) < need) grid *= 2;
  return grid;
}

std::vector<cplx> balayage_moments(const Balayage& b, int kmax) {
  if (kmax < 0) throw Error(ErrorCode::BadInput, "kmax must be >= 0");
  std::vector<cplx> m(static_cast<std::size_t>(kmax) + 1, 0.0);
  const double inv = 1.0 / static_cast<double>(b.theta.size());
  for (int k = 0; k <= kmax; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < b.theta.size(); ++j) s += std::polar(b.density[j], k * b.theta[j]);
    m[static_cast<std::size_t>(k)] = s * inv;
  }
  return m;
}

std::vector<cplx> point_moments(std::span<const cplx> points, int kmax) {
  if (kmax < 0) throw Error(ErrorCode::BadInput, "kmax must be >= 0");
  if (points.empty()) throw Error(ErrorCode::BadInput, "moments of an empty point set");
  std::vector<cplx> m(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (const auto& z : points) {
    cplx p = 1.0;
    for (int k = 0; k <= kmax; ++k) {
      m[static_cast<std::size_t>(k)] += p;
      p *= z;
    }
  }
  for (auto& x : m) x /= static_cast<double>(points.size());
  return m;
}

CnClassReport cn_class_check(const VerblunskyParams& v) {
  if (v.size() == 0) throw Error(ErrorCode::BadInput, "cn_class_check needs at least one coefficient");
  CnClassReport r;
  for (const auto& a : v.alpha) r.sup_alpha = std::max(r.sup_alpha, std::abs(a));
  if (!(r.sup_alpha < 1.0)) throw Error(ErrorCode::NotApplicable, "sup |alpha| >= 1");
  const double big_a = r.sup_alpha;
  r.l_of_a = big_a > 0.0 ? -std::log1p(-big_a) / (2.0 * big_a) : 0.5;

  constexpr double slack = 1.0 + 1e-12;
  double s_log = 0.0, s_sq = 0.0, s_abs = 0.0;
  r.product_root.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double m2 = std::norm(v.alpha[j]);
    const double nl = -v.log_rho(j);
    if (nl > r.l_of_a * m2 * slack) ++r.pointwise_violations;
    s_log += nl;
    s_sq += m2;
    s_abs += std::sqrt(m2);
    if (s_log > r.l_of_a * s_sq * slack || s_sq > s_abs * slack) ++r.chain_violations;
    r.product_root.push_back(std::exp(-s_log / static_cast<double>(j + 1)));
  }
  return r;
}

double circle_arc_capacity(double arc_length) {
  if (!(arc_length > 0.0)) throw Error(ErrorCode::BadInput, "arc length must be positive");
  if (arc_length >= 2.0 * std::numbers::pi * (1.0 - 1e-12)) return 1.0;
  throw Error(ErrorCode::Unsupported, "capacity of a proper arc of the circle is not implemented");
}

}  // namespace logpot
