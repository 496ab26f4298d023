#include "logpot/oprl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <type_traits>

#include <quadmath.h>

#include "logpot/error.hpp"
#include "logpot/parallel.hpp"
#include "logpot/tridiag.hpp"

namespace logpot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Quad = __float128;

long double r_exp(long double v) { return std::exp(v); }
long double r_sqrt(long double v) { return std::sqrt(v); }
Quad r_exp(Quad v) { return expq(v); }
Quad r_sqrt(Quad v) { return sqrtq(v); }

template <class Real>
constexpr Real breakdown_ratio() {
  if constexpr (std::is_same_v<Real, Quad>) {
    return static_cast<Real>(1e-30);
  } else {
    return static_cast<Real>(1e-17);
  }
}

bool is_square(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

double log_sum_exp(std::span<const double> v) {
  double top = -kInf;
  for (double x : v) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  long double s = 0.0L;
  for (double x : v) s += std::exp(static_cast<long double>(x - top));
  return top + static_cast<double>(std::log(s));
}

struct Lanczos {
  JacobiParams j;
  double log_mass{0.0};
};

// Nodes must be distinct.
template <class Real>
Lanczos lanczos(std::span<const double> x, std::span<const double> lw, std::size_t n) {
  const std::size_t m = x.size();
  std::size_t support = 0;
  for (double v : lw) support += std::isfinite(v) ? 1 : 0;
  if (n >= support) {
    throw Error(ErrorCode::RankDeficient, "measure has " + std::to_string(support) +
                                              " support points, cannot build " + std::to_string(n) +
                                              " Jacobi parameters");
  }
  Lanczos out;
  out.log_mass = log_sum_exp(lw);
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1e-300);

  std::vector<std::vector<Real>> q;
  q.reserve(n + 1);
  std::vector<Real> q0(m);
  Real norm = 0;
  for (std::size_t i = 0; i < m; ++i) {
    q0[i] = r_exp(static_cast<Real>(0.5) * static_cast<Real>(lw[i] - out.log_mass));
    norm += q0[i] * q0[i];
  }
  norm = r_sqrt(norm);
  for (auto& v : q0) v /= norm;
  q.push_back(std::move(q0));

  out.j.a.reserve(n);
  out.j.b.reserve(n);
  Real a_prev = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& qk = q[k];
    Real b = 0;
    for (std::size_t i = 0; i < m; ++i) b += static_cast<Real>(x[i]) * qk[i] * qk[i];
    std::vector<Real> r(m);
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = (static_cast<Real>(x[i]) - b) * qk[i];
      if (k > 0) r[i] -= a_prev * q[k - 1][i];
    }
    // Two passes of classical Gram-Schmidt against every earlier vector.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t l = 0; l <= k; ++l) {
        Real c = 0;
        for (std::size_t i = 0; i < m; ++i) c += q[l][i] * r[i];
        for (std::size_t i = 0; i < m; ++i) r[i] -= c * q[l][i];
      }
    }
    Real a = 0;
    for (Real v : r) a += v * v;
    a = r_sqrt(a);
    out.j.b.push_back(static_cast<double>(b));
    out.j.a.push_back(static_cast<double>(a));
    if (!(a > breakdown_ratio<Real>() * static_cast<Real>(scale))) {
      throw Error(ErrorCode::RankDeficient, "Lanczos breakdown at step " + std::to_string(k + 1));
    }
    for (auto& v : r) v /= a;
    q.push_back(std::move(r));
    a_prev = a;
  }
  return out;
}

// Distinct nodes with weights combined in the log domain.
void merge_log_atoms(std::span<const double> nodes, std::span<const double> lw, std::vector<double>& x,
                     std::vector<double>& w) {
  if (nodes.size() != lw.size()) throw Error(ErrorCode::BadInput, "nodes and weights differ in length");
  std::map<double, std::vector<double>> groups;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || std::isnan(lw[i])) throw Error(ErrorCode::BadInput, "non-finite atom");
    groups[nodes[i]].push_back(lw[i]);
  }
  x.clear();
  w.clear();
  for (const auto& [node, ws] : groups) {
    x.push_back(node);
    w.push_back(log_sum_exp(ws));
  }
}

}  // namespace

double JacobiParams::sup_a() const {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

double JacobiParams::sup_b() const {
  double s = 0.0;
  for (double v : b) s = std::max(s, std::abs(v));
  return s;
}

JacobiParams free_jacobi(std::size_t n) { return {std::vector<double>(n, 1.0), std::vector<double>(n, 0.0)}; }

JacobiParams sparse_perturbation_jacobi(std::size_t n) {
  JacobiParams j = free_jacobi(n);
  for (std::size_t k = 1; k <= n; ++k) {
    if (is_square(k)) j.a[k - 1] = 0.5;
  }
  return j;
}

JacobiParams random_sign_jacobi(std::size_t n, std::uint64_t seed) {
  JacobiParams j{std::vector<double>(n, 0.5), std::vector<double>(n, 0.0)};
  std::mt19937_64 rng(seed);
  for (auto& b : j.b) b = (rng() >> 63) != 0 ? 1.0 : -1.0;
  return j;
}

JacobiParams block_jacobi(std::size_t n) {
  JacobiParams j = free_jacobi(n);
  for (std::size_t k = 1; k * k <= n; ++k) {
    for (std::size_t i = k * k; i <= k * k + k && i <= n; ++i) j.b[i - 1] = 1.0;
  }
  return j;
}

JacobiParams jacobi_from_measure(const DiscretizedMeasure& mu, std::size_t n) {
  std::vector<double> x;
  std::vector<double> lw;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weights[i] < 0 || !std::isfinite(mu.weights[i])) {
      throw Error(ErrorCode::BadInput, "measure weights must be finite and non-negative");
    }
    if (mu.weights[i] == 0) continue;
    x.push_back(mu.nodes[i]);
    lw.push_back(std::log(mu.weights[i]));
  }
  std::vector<double> mx;
  std::vector<double> mw;
  merge_log_atoms(x, lw, mx, mw);
  return lanczos<long double>(mx, mw, n).j;
}

JacobiParams jacobi_from_log_atoms(std::span<const double> nodes, std::span<const double> log_weights,
                                   std::size_t n) {
  std::vector<double> x;
  std::vector<double> w;
  merge_log_atoms(nodes, log_weights, x, w);
  return lanczos<Quad>(x, w, n).j;
}

std::complex<double> orthonormal_eval(const JacobiParams& j, std::size_t n, std::complex<double> z) {
  if (n > j.size()) throw Error(ErrorCode::BadInput, "degree exceeds the Jacobi parameter length");
  std::complex<double> prev = 0.0;
  std::complex<double> cur = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a_prev = k > 0 ? j.a[k - 1] : 0.0;
    const std::complex<double> next = ((z - j.b[k]) * cur - a_prev * prev) / j.a[k];
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_abs_orthonormal(const JacobiParams& j, std::size_t n, std::complex<double> z) {
  if (n > j.size()) throw Error(ErrorCode::BadInput, "degree exceeds the Jacobi parameter length");
  std::complex<double> prev = 0.0;
  std::complex<double> cur = 1.0;
  double log_scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a_prev = k > 0 ? j.a[k - 1] : 0.0;
    const std::complex<double> next = ((z - j.b[k]) * cur - a_prev * prev) / j.a[k];
    prev = cur;
    cur = next;
    if (k % 32 == 31) {
      const double s = std::max(std::abs(cur), std::abs(prev));
      if (s > 0 && std::isfinite(s)) {
        prev /= s;
        cur /= s;
        log_scale += std::log(s);
      }
    }
  }
  return log_scale + std::log(std::abs(cur));
}

ZeroCountingMeasure zero_counting(const JacobiParams& j, std::size_t n) {
  if (n == 0 || n > j.size()) throw Error(ErrorCode::BadInput, "zero counting needs 1 <= n <= length");
  std::span<const double> diag(j.b.data(), n);
  std::span<const double> off(j.a.data(), n - 1);
  return {tridiagonal_eigenvalues(diag, off), n};
}

double zero_counting_ks(const JacobiParams& j, std::size_t n, const EquilibriumMeasure& eq, std::size_t levels) {
  if (n == 0 || n > j.size()) throw Error(ErrorCode::BadInput, "zero counting needs 1 <= n <= length");
  std::span<const double> diag(j.b.data(), n);
  std::vector<double> off_sq(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) off_sq[k] = j.a[k] * j.a[k];
  std::vector<double> lv(levels - 1);
  for (std::size_t k = 1; k < levels; ++k) lv[k - 1] = static_cast<double>(k) / static_cast<double>(levels);
  const std::vector<double> xs = eq.quantiles(lv);
  // Fractions of zeros below each quantile, with 0 and 1 at the ends.
  std::vector<double> frac(levels + 1);
  frac[0] = static_cast<double>(sturm_count(diag, off_sq, eq.set().hull().lo)) / static_cast<double>(n);
  for (std::size_t k = 1; k < levels; ++k) {
    frac[k] = static_cast<double>(sturm_count(diag, off_sq, xs[k - 1])) / static_cast<double>(n);
  }
  frac[levels] = 1.0 - static_cast<double>(n - sturm_count(diag, off_sq, std::nextafter(eq.set().hull().hi, kInf))) /
                           static_cast<double>(n);
  // Zeros outside the hull count as full discrepancy at the ends.
  double ks = std::max(frac[0], 1.0 - frac[levels]);
  const double step = 1.0 / static_cast<double>(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const double f_lo = static_cast<double>(k) * step;
    ks = std::max(ks, frac[k + 1] - f_lo);
    ks = std::max(ks, f_lo + step - frac[k]);
  }
  return std::min(ks, 1.0);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Regular:
      return "regular";
    case Verdict::NotRegular:
      return "not_regular";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

RegularityReport regularity_diagnostic(const JacobiParams& j, const IntervalUnion& e,
                                       std::span<const std::size_t> n_list) {
  if (n_list.empty()) throw Error(ErrorCode::BadInput, "n_list is empty");
  std::size_t n_max = 0;
  for (std::size_t n : n_list) {
    if (n == 0 || n > j.size()) throw Error(ErrorCode::BadInput, "n_list entries must lie in [1, length]");
    n_max = std::max(n_max, n);
  }
  for (std::size_t k = 0; k < n_max; ++k) {
    if (!(j.a[k] > 0)) throw Error(ErrorCode::BadInput, "Jacobi a_n must be positive");
  }
  const EquilibriumMeasure eq = equilibrium(e);
  RegularityReport rep;
  rep.capacity = eq.capacity();

  std::vector<double> cum(n_max + 1, 0.0);
  for (std::size_t k = 0; k < n_max; ++k) cum[k + 1] = cum[k] + std::log(j.a[k]);
  auto gamma = [&](std::size_t n) { return std::exp(cum[n] / static_cast<double>(n)); };

  rep.n_list.assign(n_list.begin(), n_list.end());
  rep.gamma_n.resize(n_list.size());
  rep.ks_distance.resize(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) rep.gamma_n[i] = gamma(n_list[i]);
  parallel_for(n_list.size(), [&](std::size_t i) { rep.ks_distance[i] = zero_counting_ks(j, n_list[i], eq); });

  // Least squares Gamma_n = c + d / sqrt(n) on the last decade.
  const std::size_t n_lo = std::max<std::size_t>(1, n_max / 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double count = 0;
  bool all_above = true;
  for (std::size_t n = n_lo; n <= n_max; ++n) {
    const double x = 1.0 / std::sqrt(static_cast<double>(n));
    const double y = gamma(n);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    count += 1;
    all_above = all_above && y > rep.capacity * (1.0 + 1e-3);
  }
  const double den = count * sxx - sx * sx;
  if (count < 3 || std::abs(den) < 1e-300) {
    rep.limit = gamma(n_max);
  } else {
    const double slope = (count * sxy - sx * sy) / den;
    rep.limit = (sy - slope * sx) / count;
  }
  // Gamma_n may approach C(E) from above; only a limit above it is impossible.
  if (all_above && rep.limit > rep.capacity * (1.0 + 1e-3) && n_max >= 10) {
    throw Error(ErrorCode::InconsistentSetClaim,
                "(a_1...a_n)^{1/n} stays above C(E); E cannot be the essential support");
  }
  rep.margin = rep.limit / rep.capacity - 1.0;
  if (std::abs(rep.margin) <= 0.01) {
    rep.verdict = Verdict::Regular;
  } else if (rep.margin < -0.05) {
    rep.verdict = Verdict::NotRegular;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

LowerBoundReport lower_bound_check(const JacobiParams& j, std::complex<double> z, std::size_t n,
                                   const Interval& hull) {
  LowerBoundReport rep;
  rep.big_d = hull.half_width();
  const double x = z.real();
  double dx = 0.0;
  if (x < hull.lo) dx = hull.lo - x;
  if (x > hull.hi) dx = x - hull.hi;
  rep.d = std::hypot(dx, z.imag());
  if (!(rep.d > 0)) throw Error(ErrorCode::NotApplicable, "z lies in the convex hull of the support");
  const double r = rep.d / rep.big_d;
  rep.log_bound = std::log(r) + 0.5 * (static_cast<double>(n) - 1.0) * std::log1p(r * r);
  rep.log_abs_pn = log_abs_orthonormal(j, n, z);
  rep.holds = std::isfinite(rep.log_abs_pn) && rep.log_abs_pn >= rep.log_bound - 1e-12 * (1.0 + std::abs(rep.log_bound));
  return rep;
}

StahlTotikScan stahl_totik_scan(const DiscretizedMeasure& mu, const IntervalUnion& e, int m, double eta) {
  if (m < 1) throw Error(ErrorCode::BadInput, "m must be at least 1");
  if (!(eta > 0)) throw Error(ErrorCode::BadInput, "eta must be positive");
  std::vector<std::pair<double, double>> atoms;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weights[i] > 0) atoms.emplace_back(mu.nodes[i], mu.weights[i]);
  }
  std::sort(atoms.begin(), atoms.end());
  const double radius = 1.0 / m;
  const double log_threshold = -static_cast<double>(m) * eta;
  StahlTotikScan out;
  for (const auto& iv : e.intervals()) {
    const auto cells = static_cast<std::size_t>(std::ceil(iv.length() * 10.0 * m));
    const double h = iv.length() / static_cast<double>(cells);
    out.spacing = std::max(out.spacing, h);
    out.grid_points += cells;
    for (std::size_t g = 0; g < cells; ++g) {
      const double x = iv.lo + (static_cast<double>(g) + 0.5) * h;
      auto it = std::lower_bound(atoms.begin(), atoms.end(), std::pair{x - radius, -kInf});
      double mass = 0.0;
      for (; it != atoms.end() && it->first <= x + radius; ++it) mass += it->second;
      if (!(mass > 0) || std::log(mass) <= log_threshold) out.bad_length += h;
    }
  }
  return out;
}

LogAtoms dyadic_atoms(double y, double log_cutoff) {
  if (!(y > 0 && y < 1)) throw Error(ErrorCode::BadInput, "y must lie in (0, 1)");
  LogAtoms out;
  const double ly = std::log(y);
  for (std::size_t k = 1;; ++k) {
    const double lw = static_cast<double>(k) * ly;
    if (lw < log_cutoff) break;
    std::size_t p = 1;
    while (2 * p <= k) p *= 2;
    out.nodes.push_back(static_cast<double>(k - p) / static_cast<double>(p));
    out.log_weights.push_back(lw);
  }
  return out;
}

DiscretizedMeasure to_measure(const LogAtoms& atoms) {
  std::vector<double> w(atoms.log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(atoms.log_weights[i]);
  return DiscretizedMeasure::from_atoms(atoms.nodes, std::move(w));
}

PurePointBound pure_point_bound(const LogAtoms& atoms, std::size_t n) {
  if (atoms.nodes.empty() || atoms.nodes.size() != atoms.log_weights.size()) {
    throw Error(ErrorCode::BadInput, "atom list is empty or inconsistent");
  }
  PurePointBound out;
  const auto [lo, hi] = std::minmax_element(atoms.nodes.begin(), atoms.nodes.end());
  out.d = *hi - *lo;
  if (n >= atoms.log_weights.size()) {
    out.log_tail = -kInf;
  } else {
    out.log_tail = log_sum_exp(std::span<const double>(atoms.log_weights).subspan(n));
  }
  out.log_bound = (n == 0 ? 0.0 : static_cast<double>(n) * std::log(out.d)) + 0.5 * out.log_tail;
  return out;
}

double log_monic_norm(const LogAtoms& atoms, std::size_t n) {
  std::vector<double> x;
  std::vector<double> w;
  merge_log_atoms(atoms.nodes, atoms.log_weights, x, w);
  const double log_mass = log_sum_exp(w);
  if (n == 0) return 0.5 * log_mass;
  const Lanczos l = lanczos<Quad>(x, w, n);
  double s = 0.5 * log_mass;
  for (double a : l.j.a) s += std::log(a);
  return s;
}

namespace {

EndpointSingularity piece_singularity(const AcComponent& c, double u, double v) {
  const bool left = (c.singularity == EndpointSingularity::Left || c.singularity == EndpointSingularity::Both) &&
                    u == c.support.lo;
  const bool right = (c.singularity == EndpointSingularity::Right || c.singularity == EndpointSingularity::Both) &&
                     v == c.support.hi;
  if (left && right) return EndpointSingularity::Both;
  if (left) return EndpointSingularity::Left;
  if (right) return EndpointSingularity::Right;
  return EndpointSingularity::None;
}

// Cell index j with j/n < x <= (j+1)/n.
long cell_of(double x, int n) {
  const double dn = n;
  auto j = static_cast<long>(std::ceil(x * dn)) - 1;
  while (static_cast<double>(j) / dn >= x) --j;
  while (static_cast<double>(j + 1) / dn < x) ++j;
  return j;
}

}  // namespace

MeasureSpec regularize_measure(const MeasureSpec& mu, const IntervalUnion& e, int n_terms) {
  if (n_terms < 1 || n_terms > 40) throw Error(ErrorCode::BadInput, "n_terms must be in [1, 40]");
  for (const auto& p : mu.point_masses) {
    if (!e.contains(p.location, 1e-12)) throw Error(ErrorCode::BadSupport, "atom outside E");
    if (!(p.weight >= 0)) throw Error(ErrorCode::BadInput, "negative atom weight");
  }
  for (const auto& c : mu.ac_components) {
    if (!e.contains(c.support.lo, 1e-12) || e.locate(c.support.lo, 1e-12) != e.locate(c.support.hi, 1e-12)) {
      throw Error(ErrorCode::BadSupport, "absolutely continuous part leaves E");
    }
  }

  // Pieces of every component cut at all j/n, n <= n_terms.
  struct Piece {
    std::size_t comp;
    double u, v, mass;
  };
  std::vector<Piece> pieces;
  for (std::size_t ci = 0; ci < mu.ac_components.size(); ++ci) {
    const auto& c = mu.ac_components[ci];
    std::vector<double> cuts{c.support.lo, c.support.hi};
    for (int n = 1; n <= n_terms; ++n) {
      const auto j0 = static_cast<long>(std::floor(c.support.lo * n));
      const auto j1 = static_cast<long>(std::ceil(c.support.hi * n));
      for (long jj = j0; jj <= j1; ++jj) {
        const double t = static_cast<double>(jj) / n;
        if (t > c.support.lo && t < c.support.hi) cuts.push_back(t);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) pieces.push_back({ci, cuts[k], cuts[k + 1], 0.0});
  }
  parallel_for(pieces.size(), [&](std::size_t k) {
    const auto& c = mu.ac_components[pieces[k].comp];
    MeasureSpec one;
    one.ac_components.push_back({{pieces[k].u, pieces[k].v}, c.density, piece_singularity(c, pieces[k].u, pieces[k].v)});
    pieces[k].mass = discretize(one, 48).total_mass;
  });

  // Cell masses per level.
  std::vector<std::map<long, double>> cell_mass(static_cast<std::size_t>(n_terms) + 1);
  for (int n = 1; n <= n_terms; ++n) {
    auto& cm = cell_mass[static_cast<std::size_t>(n)];
    for (const auto& p : mu.point_masses) cm[cell_of(p.location, n)] += p.weight;
    for (const auto& p : pieces) cm[cell_of(0.5 * (p.u + p.v), n)] += p.mass;
  }
  auto factor = [&](double x) {
    double g = 0.0;
    for (int n = 1; n <= n_terms; ++n) {
      const double cm = cell_mass[static_cast<std::size_t>(n)].at(cell_of(x, n));
      if (cm > 0) g += 1.0 / (static_cast<double>(n) * n * n * cm);
    }
    return g;
  };

  MeasureSpec out;
  for (const auto& p : mu.point_masses) {
    if (p.weight > 0) out.point_masses.push_back({p.location, p.weight * factor(p.location)});
  }
  for (const auto& p : pieces) {
    if (!(p.mass > 0)) continue;
    const auto& c = mu.ac_components[p.comp];
    const double g = factor(0.5 * (p.u + p.v));
    auto dens = c.density;
    out.ac_components.push_back({{p.u, p.v}, [dens, g](double x) { return g * dens(x); },
                                 piece_singularity(c, p.u, p.v)});
  }
  return out;
}

}  // namespace logpot
