#include "logpot/chebfek.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "logpot/error.hpp"
#include "logpot/parallel.hpp"
#include "logpot/potential.hpp"

namespace logpot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Affine chart sending the hull of E onto [-2, 2]; all solvers run there.
struct Chart {
  double mid{0.0};
  double scale{1.0};

  explicit Chart(const IntervalUnion& e) : mid(e.hull().mid()), scale(0.5 * e.hull().half_width()) {}
  double to_x(double t) const { return mid + scale * t; }
  IntervalUnion normalized(const IntervalUnion& e) const { return e.scale_translate(1.0 / scale, -mid / scale); }
};

struct GridPoint {
  double t;
  std::size_t interval;
};

// Chebyshev-spaced grid, endpoints included, `per` cells per interval.
std::vector<GridPoint> make_grid(const IntervalUnion& e, std::size_t per) {
  std::vector<GridPoint> g;
  g.reserve(e.size() * (per + 1));
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& iv = e[i];
    for (std::size_t k = 0; k <= per; ++k) {
      double t = iv.mid() - iv.half_width() * std::cos(kPi * static_cast<double>(k) / static_cast<double>(per));
      if (k == 0) t = iv.lo;
      if (k == per) t = iv.hi;
      g.push_back({t, i});
    }
  }
  return g;
}

double project(const IntervalUnion& e, double t) {
  if (e.contains(t)) return t;
  double best = e[0].lo;
  double dist = kInf;
  for (const auto& iv : e.intervals()) {
    for (double end : {iv.lo, iv.hi}) {
      if (std::abs(end - t) < dist) {
        dist = std::abs(end - t);
        best = end;
      }
    }
  }
  return best;
}

// Golden-section maximization of f on [a, b].
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b) {
  const double g = 0.5 * (3.0 - std::sqrt(5.0));
  double x1 = a + g * (b - a);
  double x2 = b - g * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 100 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = b - g * (b - a);
      f2 = f(x2);
    }
  }
  return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

// ---------------------------------------------------------------------------
// Remez

// Monic degree-n polynomial levelled on a reference y_0 < ... < y_n:
// T(y_i) = (-1)^{n-i} h. In barycentric form T(x) = l(x) sum_i w_i / (x - y_i)
// with w_i = |lambda_i| / sum |lambda| and h = 1 / sum |lambda|.
class LevelledPolynomial {
 public:
  explicit LevelledPolynomial(std::vector<double> y) : y_(std::move(y)) {
    const std::size_t m = y_.size();
    std::vector<double> loglam(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j != i) s -= std::log(std::abs(y_[i] - y_[j]));
      }
      loglam[i] = s;
    }
    const double top = *std::max_element(loglam.begin(), loglam.end());
    double sum = 0.0;
    w_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      w_[i] = std::exp(loglam[i] - top);
      sum += w_[i];
    }
    for (auto& v : w_) v /= sum;
    log_h_ = -(top + std::log(sum));
  }

  double level() const { return std::exp(log_h_); }
  const std::vector<double>& reference() const { return y_; }
  int degree() const { return static_cast<int>(y_.size()) - 1; }

  double operator()(double x) const {
    const std::size_t m = y_.size();
    double log_l = 0.0;
    int sign = 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = x - y_[i];
      if (d == 0.0) return ((m - 1 - i) % 2 == 0 ? 1.0 : -1.0) * level();
      log_l += std::log(std::abs(d));
      if (d < 0) sign = -sign;
      acc += w_[i] / d;
    }
    if (acc == 0.0) return 0.0;
    return sign * std::copysign(std::exp(log_l + std::log(std::abs(acc))), acc);
  }

 private:
  std::vector<double> y_;
  std::vector<double> w_;
  double log_h_{0.0};
};

struct Extremum {
  double t;
  double v;
};

// One sign-run maximum of |T| per maximal run of constant sign along the grid.
std::vector<Extremum> alternating_extrema(const LevelledPolynomial& p, const IntervalUnion& e,
                                          std::vector<GridPoint> grid) {
  for (std::size_t i = 0; i < p.reference().size(); ++i) {
    const double y = p.reference()[i];
    grid.push_back({y, e.locate(y, 1e-13)});
  }
  std::sort(grid.begin(), grid.end(), [](const GridPoint& a, const GridPoint& b) { return a.t < b.t; });
  std::vector<double> vals(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) vals[k] = p(grid[k].t);

  std::vector<Extremum> out;
  std::size_t k = 0;
  while (k < grid.size()) {
    if (vals[k] == 0.0) {
      ++k;
      continue;
    }
    const bool pos = vals[k] > 0;
    std::size_t best = k;
    std::size_t j = k;
    while (j < grid.size() && (vals[j] == 0.0 || (vals[j] > 0) == pos)) {
      if (std::abs(vals[j]) > std::abs(vals[best])) best = j;
      ++j;
    }
    Extremum ex{grid[best].t, vals[best]};
    auto absval = [&](double t) {
      const double v = p(t);
      return (v > 0) == pos ? std::abs(v) : 0.0;
    };
    const std::size_t iv = grid[best].interval;
    const double lo = best > 0 && grid[best - 1].interval == iv ? grid[best - 1].t : grid[best].t;
    const double hi = best + 1 < grid.size() && grid[best + 1].interval == iv ? grid[best + 1].t : grid[best].t;
    if (hi > lo) {
      const auto [tm, fm] = golden_max(absval, lo, hi);
      if (fm > std::abs(ex.v)) ex = {tm, pos ? fm : -fm};
    }
    out.push_back(ex);
    k = j;
  }
  return out;
}

void trim_to(std::vector<Extremum>& ex, std::size_t want) {
  while (ex.size() > want) {
    if (ex.size() == want + 1) {
      if (std::abs(ex.front().v) < std::abs(ex.back().v)) {
        ex.erase(ex.begin());
      } else {
        ex.pop_back();
      }
      continue;
    }
    std::size_t k = 0;
    for (std::size_t i = 1; i < ex.size(); ++i) {
      if (std::abs(ex[i].v) < std::abs(ex[k].v)) k = i;
    }
    if (k == 0 || k + 1 == ex.size()) {
      ex.erase(ex.begin() + static_cast<std::ptrdiff_t>(k));
      continue;
    }
    // Dropping a pair keeps the signs alternating.
    const std::size_t partner = std::abs(ex[k - 1].v) < std::abs(ex[k + 1].v) ? k - 1 : k + 1;
    ex.erase(ex.begin() + static_cast<std::ptrdiff_t>(std::max(k, partner)));
    ex.erase(ex.begin() + static_cast<std::ptrdiff_t>(std::min(k, partner)));
  }
}

double bisect_root(const LevelledPolynomial& p, double a, double b) {
  double fa = p(a);
  for (int it = 0; it < 200 && b - a > 4e-16 * (std::abs(a) + std::abs(b) + 1e-300); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = p(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct RemezOutcome {
  std::vector<double> roots;  // chart coordinates
  std::vector<double> reference;
  double norm{0.0};           // chart coordinates
  double ratio{1.0};
  int iterations{0};
};

RemezOutcome remez(const IntervalUnion& et, int n) {
  const std::size_t want = static_cast<std::size_t>(n) + 1;
  const auto grid = make_grid(et, 64 * static_cast<std::size_t>(n));

  // Initial reference: equilibrium quantiles at k/n.
  const EquilibriumMeasure eq = equilibrium(et);
  std::vector<double> levels(want);
  for (std::size_t k = 0; k < want; ++k) levels[k] = static_cast<double>(k) / static_cast<double>(n);
  std::vector<double> ref = eq.quantiles(levels);
  ref.front() = et.hull().lo;
  ref.back() = et.hull().hi;
  for (std::size_t k = 1; k < ref.size(); ++k) {
    if (!(ref[k] > ref[k - 1])) throw Error(ErrorCode::ExchangeStall, "degenerate initial Remez reference");
  }

  double best_level = 0.0;
  int stale = 0;
  RemezOutcome out;
  for (int iter = 1; iter <= 200; ++iter) {
    LevelledPolynomial p(ref);
    auto ex = alternating_extrema(p, et, grid);
    double top = 0.0;
    for (const auto& e : ex) top = std::max(top, std::abs(e.v));
    const double h = p.level();
    const double ratio = top / h;
    out.iterations = iter;
    if (ex.size() < want) {
      throw Error(ErrorCode::ExchangeStall, "Remez reference lost alternation at degree " + std::to_string(n));
    }
    if (ratio <= 1.0 + 1e-10 || (iter > 1 && stale >= 8 && ratio <= 1.0 + 1e-8)) {
      out.reference = p.reference();
      out.ratio = ratio;
      out.norm = top;
      out.roots.resize(static_cast<std::size_t>(n));
      for (std::size_t i = 0; i + 1 < ref.size(); ++i) out.roots[i] = bisect_root(p, ref[i], ref[i + 1]);
      return out;
    }
    if (h > best_level * (1.0 + 1e-14)) {
      best_level = h;
      stale = 0;
    } else if (++stale > 12) {
      throw Error(ErrorCode::ExchangeStall, "Remez exchange stalled at degree " + std::to_string(n) +
                                                "; best levelled error " + std::to_string(best_level) +
                                                ", ratio " + std::to_string(ratio));
    }
    trim_to(ex, want);
    ref.clear();
    for (const auto& e : ex) ref.push_back(e.t);
  }
  throw Error(ErrorCode::ExchangeStall, "Remez exchange hit the iteration cap at degree " + std::to_string(n));
}

double product_norm(const IntervalUnion& et, std::span<const double> roots) {
  return sup_norm_on_set([&](double t) { return abs_product(roots, t); }, et,
                         std::max<std::size_t>(256, 64 * roots.size()));
}

// ---------------------------------------------------------------------------
// Fekete

struct Config {
  std::vector<double> x;  // chart coordinates, ascending
  double f{-kInf};        // sum_{i<j} log|x_i - x_j|
};

double pair_energy(std::span<const double> x) {
  double f = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) f += std::log(std::abs(x[j] - x[i]));
  }
  return f;
}

// Active-set Newton on the concave pair energy with points confined to their
// current components. A point on a component end is pinned while the force
// pushes it outward; steps are cut back so free points stop at the ends.
struct Forces {
  std::vector<double> g;
  std::vector<std::size_t> free;
  double residual{0.0};
};

Forces forces(const IntervalUnion& e, const std::vector<std::size_t>& comp, const std::vector<double>& x) {
  const std::size_t n = x.size();
  Forces out;
  out.g.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) out.g[i] += 1.0 / (x[i] - x[j]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& iv = e[comp[i]];
    const bool at_lo = x[i] <= iv.lo && out.g[i] <= 0.0;
    const bool at_hi = x[i] >= iv.hi && out.g[i] >= 0.0;
    if (!at_lo && !at_hi) {
      out.free.push_back(i);
      out.residual = std::max(out.residual, std::abs(out.g[i]));
    }
  }
  return out;
}

Config solve_fixed(const IntervalUnion& e, std::vector<double> x) {
  const std::size_t n = x.size();
  std::sort(x.begin(), x.end());
  std::vector<std::size_t> comp(n);
  for (std::size_t i = 0; i < n; ++i) {
    comp[i] = e.locate(x[i], 1e-12);
    x[i] = std::clamp(x[i], e[comp[i]].lo, e[comp[i]].hi);
  }
  double f = pair_energy(x);
  Forces fx = forces(e, comp, x);
  for (int iter = 0; iter < 500; ++iter) {
    const std::vector<double>& g = fx.g;
    const std::vector<std::size_t>& free = fx.free;
    if (free.empty()) break;
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index p = 0; p < m; ++p) {
      const std::size_t i = free[static_cast<std::size_t>(p)];
      double diag = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) diag += 1.0 / ((x[i] - x[j]) * (x[i] - x[j]));
      }
      a(p, p) = diag * (1.0 + 1e-14);
      for (Eigen::Index q = 0; q < m; ++q) {
        if (q == p) continue;
        const double d = x[i] - x[free[static_cast<std::size_t>(q)]];
        a(p, q) = -1.0 / (d * d);
      }
      rhs(p) = g[i];
    }
    const Eigen::VectorXd d = a.ldlt().solve(rhs);
    if (!d.allFinite()) break;

    // Longest step keeping every free point inside its component.
    double alpha = 1.0;
    std::size_t hit = n;
    for (Eigen::Index p = 0; p < m; ++p) {
      const std::size_t i = free[static_cast<std::size_t>(p)];
      const auto& iv = e[comp[i]];
      const double di = d(p);
      const double room = di > 0 ? iv.hi - x[i] : x[i] - iv.lo;
      if (di != 0.0 && std::abs(di) * alpha > room) {
        alpha = room / std::abs(di);
        hit = i;
      }
    }
    double step_max = 0.0;
    for (Eigen::Index p = 0; p < m; ++p) step_max = std::max(step_max, std::abs(d(p)));
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      std::vector<double> y = x;
      for (Eigen::Index p = 0; p < m; ++p) {
        const std::size_t i = free[static_cast<std::size_t>(p)];
        const auto& iv = e[comp[i]];
        y[i] = std::clamp(x[i] + alpha * d(p), iv.lo, iv.hi);
      }
      if (hit < n && ls == 0) y[hit] = d(static_cast<Eigen::Index>(
                                          std::find(free.begin(), free.end(), hit) - free.begin())) > 0
                                           ? e[comp[hit]].hi
                                           : e[comp[hit]].lo;
      bool ordered = true;
      for (std::size_t i = 1; i < n; ++i) ordered = ordered && y[i] > y[i - 1];
      if (ordered) {
        // Near the optimum the energy gain drops below rounding, so a step
        // that leaves the energy flat but shrinks the force is also taken.
        const double fy = pair_energy(y);
        const bool flat = fy >= f - 1e-13 * (1.0 + std::abs(f));
        Forces fy_forces;
        if (!(fy > f) && flat) fy_forces = forces(e, comp, y);
        if (fy > f || (flat && fy_forces.residual < 0.5 * fx.residual)) {
          x = std::move(y);
          f = fy;
          fx = fy_forces.g.empty() ? forces(e, comp, x) : std::move(fy_forces);
          moved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!moved || alpha * step_max < 1e-16) break;
  }
  return {x, f};
}

std::vector<double> initial_points(const IntervalUnion& e, const std::vector<std::size_t>& occ) {
  std::vector<double> x;
  for (std::size_t c = 0; c < e.size(); ++c) {
    const auto& iv = e[c];
    const std::size_t k = occ[c];
    if (k == 1) x.push_back(iv.mid());
    for (std::size_t j = 0; k >= 2 && j < k; ++j) {
      double t = iv.mid() - iv.half_width() * std::cos(kPi * static_cast<double>(j) / static_cast<double>(k - 1));
      if (j == 0) t = iv.lo;
      if (j + 1 == k) t = iv.hi;
      x.push_back(t);
    }
  }
  return x;
}

std::vector<std::size_t> largest_remainder(std::span<const double> share, std::size_t n) {
  std::vector<std::size_t> occ(share.size(), 0);
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t c = 0; c < share.size(); ++c) {
    const double want = share[c] * static_cast<double>(n);
    occ[c] = static_cast<std::size_t>(std::floor(want));
    used += occ[c];
    rem.emplace_back(want - std::floor(want), c);
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  for (std::size_t k = 0; used < n; ++k, ++used) occ[rem[k % rem.size()].second]++;
  return occ;
}

// Moves single points to the global maximizer of their Fekete polynomial
// while that raises q_n; each move is followed by a fresh Newton solve.
Config exchange_polish(const IntervalUnion& e, Config cfg) {
  const std::size_t n = cfg.x.size();
  const auto grid = make_grid(e, 64 * n);
  for (std::size_t move = 0; move < 3 * n; ++move) {
    std::vector<double> s(grid.size(), 0.0);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      for (double z : cfg.x) s[g] += std::log(std::abs(grid[g].t - z));
    }
    double best_gain = 1e-10;
    std::size_t best_k = n;
    double best_t = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double here = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) here += std::log(std::abs(cfg.x[k] - cfg.x[j]));
      }
      std::size_t arg = grid.size();
      double val = -kInf;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        if (grid[g].t == cfg.x[k]) continue;
        const double v = s[g] - std::log(std::abs(grid[g].t - cfg.x[k]));
        if (v > val) {
          val = v;
          arg = g;
        }
      }
      if (arg == grid.size()) continue;
      auto pk = [&](double t) {
        double v = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != k) v += std::log(std::abs(t - cfg.x[j]));
        }
        return v;
      };
      double tbest = grid[arg].t;
      const std::size_t iv = grid[arg].interval;
      const double lo = arg > 0 && grid[arg - 1].interval == iv ? grid[arg - 1].t : grid[arg].t;
      const double hi = arg + 1 < grid.size() && grid[arg + 1].interval == iv ? grid[arg + 1].t : grid[arg].t;
      if (hi > lo) {
        const auto [tm, fm] = golden_max(pk, lo, hi);
        if (fm > val) {
          val = fm;
          tbest = tm;
        }
      }
      if (val - here > best_gain) {
        best_gain = val - here;
        best_k = k;
        best_t = tbest;
      }
    }
    if (best_k == n) break;
    std::vector<double> y = cfg.x;
    y[best_k] = best_t;
    bool distinct = true;
    std::sort(y.begin(), y.end());
    for (std::size_t i = 1; i < n; ++i) distinct = distinct && y[i] > y[i - 1];
    if (!distinct) break;
    Config next = solve_fixed(e, y);
    if (!(next.f > cfg.f)) break;
    cfg = std::move(next);
  }
  return cfg;
}

}  // namespace

double abs_product(std::span<const double> roots, double x) {
  double p = 1.0;
  for (double r : roots) p *= std::abs(x - r);
  return p;
}

std::vector<double> monic_from_roots(std::span<const double> roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

ChebyshevResult chebyshev(const IntervalUnion& set, int n, bool restricted) {
  if (n < 1 || n > 60) throw Error(ErrorCode::BadInput, "Chebyshev degree must be in [1, 60]");
  const Chart chart(set);
  const IntervalUnion et = chart.normalized(set);
  const double factor = std::pow(chart.scale, n);

  const RemezOutcome rz = remez(et, n);
  ChebyshevResult res;
  res.degree = n;
  res.restricted = restricted;
  res.iterations = rz.iterations;
  res.reference_ratio = rz.ratio;
  for (double y : rz.reference) res.equioscillation_points.push_back(chart.to_x(y));

  std::vector<double> troots = rz.roots;
  double tnorm = std::max(rz.norm, product_norm(et, troots));

  if (restricted) {
    bool inside = true;
    for (double r : troots) inside = inside && et.contains(r, 1e-12);
    if (!inside) {
      // Candidate 1: unrestricted roots pushed to the nearest point of E.
      std::vector<double> best = troots;
      for (auto& r : best) r = project(et, r);
      double best_norm = product_norm(et, best);

      // Candidate 2: the best Fekete polynomial of an (n+1)-point Fekete set.
      const FeketeSet fk = fekete(et, n + 1);
      for (std::size_t k = 0; k < fk.points.size(); ++k) {
        std::vector<double> roots;
        for (std::size_t j = 0; j < fk.points.size(); ++j) {
          if (j != k) roots.push_back(fk.points[j]);
        }
        const double v = product_norm(et, roots);
        if (v < best_norm) {
          best_norm = v;
          best = roots;
        }
      }

      // Smoothed descent on the roots: minimize softmax of log|T| over a grid.
      const auto grid = make_grid(et, 32 * static_cast<std::size_t>(n));
      std::vector<double> r = best;
      auto smoothed = [&](const std::vector<double>& roots, double beta, std::vector<double>* grad) {
        std::vector<double> l(grid.size());
        double top = -kInf;
        for (std::size_t g = 0; g < grid.size(); ++g) {
          double v = 0.0;
          for (double z : roots) v += std::log(std::abs(grid[g].t - z));
          l[g] = v;
          top = std::max(top, v);
        }
        double z = 0.0;
        for (auto& v : l) {
          v = std::exp(beta * (v - top));
          z += v;
        }
        if (grad) {
          grad->assign(roots.size(), 0.0);
          for (std::size_t g = 0; g < grid.size(); ++g) {
            const double w = l[g] / z;
            if (w < 1e-300) continue;
            for (std::size_t j = 0; j < roots.size(); ++j) {
              const double d = grid[g].t - roots[j];
              if (d != 0.0) (*grad)[j] -= w / d;
            }
          }
        }
        return top + std::log(z) / beta;
      };
      double step = 0.02;
      for (double beta : {8.0, 32.0, 128.0, 512.0, 2048.0, 8192.0}) {
        std::vector<double> grad;
        double fr = smoothed(r, beta, &grad);
        for (int it = 0; it < 60; ++it) {
          double gmax = 0.0;
          for (double v : grad) gmax = std::max(gmax, std::abs(v));
          if (gmax == 0.0) break;
          bool ok = false;
          for (int ls = 0; ls < 30; ++ls) {
            std::vector<double> trial = r;
            for (std::size_t j = 0; j < r.size(); ++j) trial[j] = project(et, r[j] - step * grad[j] / gmax);
            const double ft = smoothed(trial, beta, nullptr);
            if (ft < fr) {
              r = std::move(trial);
              fr = smoothed(r, beta, &grad);
              step = std::min(0.25, step * 1.5);
              ok = true;
              break;
            }
            step *= 0.5;
          }
          if (!ok) break;
        }
        std::sort(r.begin(), r.end());
        const double v = product_norm(et, r);
        if (v < best_norm) {
          best_norm = v;
          best = r;
        }
        step = std::max(step, 1e-3);
      }
      troots = best;
      tnorm = best_norm;
    }
  }

  std::sort(troots.begin(), troots.end());
  for (double r : troots) res.roots.push_back(chart.to_x(r));
  res.coefficients = monic_from_roots(res.roots);
  res.coefficients.back() = 1.0;
  res.sup_norm = tnorm * factor;
  return res;
}

double fekete_constant(std::span<const double> points) {
  const std::size_t n = points.size();
  if (n < 2) throw Error(ErrorCode::BadInput, "Fekete constant needs at least two points");
  return std::exp(2.0 * pair_energy(points) / static_cast<double>(n * (n - 1)));
}

FeketeSet fekete(const IntervalUnion& set, int n_points) {
  if (n_points < 2 || n_points > 200) throw Error(ErrorCode::BadInput, "Fekete set size must be in [2, 200]");
  const auto n = static_cast<std::size_t>(n_points);
  const Chart chart(set);
  const IntervalUnion et = chart.normalized(set);

  // Seeds: component occupations from equilibrium masses, from lengths, and
  // from masses with the remainder handed out largest-component first.
  std::vector<std::vector<std::size_t>> seeds;
  std::vector<double> mass(et.size());
  std::vector<double> len(et.size());
  if (et.size() == 1) {
    seeds.push_back({n});
  } else {
    const EquilibriumMeasure eq = equilibrium(et);
    for (std::size_t c = 0; c < et.size(); ++c) {
      mass[c] = eq.interval_mass(c);
      len[c] = et[c].length() / et.lebesgue();
    }
    seeds.push_back(largest_remainder(mass, n));
    seeds.push_back(largest_remainder(len, n));
    std::vector<std::size_t> floor_first(et.size());
    std::size_t used = 0;
    for (std::size_t c = 0; c < et.size(); ++c) {
      floor_first[c] = static_cast<std::size_t>(std::floor(mass[c] * static_cast<double>(n)));
      used += floor_first[c];
    }
    std::vector<std::size_t> order(et.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mass[a] > mass[b]; });
    for (std::size_t k = 0; used < n; ++k, ++used) floor_first[order[k % order.size()]]++;
    seeds.push_back(floor_first);
  }

  std::vector<Config> results(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    std::vector<double> x = initial_points(et, seeds[s]);
    Config cfg = solve_fixed(et, x);
    results[s] = exchange_polish(et, std::move(cfg));
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < results.size(); ++s) {
    if (results[s].f > results[best].f ||
        (results[s].f == results[best].f && results[s].x < results[best].x)) {
      best = s;
    }
  }
  const Config& cfg = results[best];
  if (!std::isfinite(cfg.f)) throw Error(ErrorCode::SolveFailed, "Fekete solve produced coincident points");

  FeketeSet out;
  for (double t : cfg.x) out.points.push_back(chart.to_x(t));
  const double pairs = static_cast<double>(n * (n - 1));
  out.log_q = 2.0 * cfg.f + pairs * std::log(chart.scale);
  out.zeta = std::exp(out.log_q / pairs);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = et.locate(cfg.x[i], 1e-14);
    const bool pinned = cfg.x[i] == et[c].lo || cfg.x[i] == et[c].hi;
    if (pinned) {
      ++out.pinned;
      continue;
    }
    double g = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) g += 1.0 / (out.points[i] - out.points[j]);
    }
    out.grad_norm = std::max(out.grad_norm, std::abs(g));
  }
  // Scale-aware acceptance: the force is a sum of terms up to 1/min spacing.
  double spacing = kInf;
  for (std::size_t i = 1; i < n; ++i) spacing = std::min(spacing, out.points[i] - out.points[i - 1]);
  if (out.grad_norm > 1e-9 * std::max(1.0, static_cast<double>(n) / spacing)) {
    throw Error(ErrorCode::SolveFailed, "Fekete electrostatic residual " + std::to_string(out.grad_norm));
  }
  return out;
}

std::vector<double> transfinite_diameter(const IntervalUnion& set, int n_max) {
  if (n_max < 2 || n_max > 200) throw Error(ErrorCode::BadInput, "n_max must be in [2, 200]");
  std::vector<double> z(static_cast<std::size_t>(n_max - 1));
  parallel_for(z.size(), [&](std::size_t k) { z[k] = fekete(set, static_cast<int>(k) + 2).zeta; });
  return z;
}

BoundsChain bounds_chain(const IntervalUnion& set, int n, double slack) {
  BoundsChain bc;
  bc.degree = n;
  bc.capacity = capacity(set);
  const double dn = static_cast<double>(n);
  bc.chebyshev_root = std::pow(chebyshev(set, n, false).sup_norm, 1.0 / dn);
  bc.restricted_root = std::pow(chebyshev(set, n, true).sup_norm, 1.0 / dn);
  bc.zeta_next = fekete(set, n + 1).zeta;
  bc.holds = bc.capacity <= bc.chebyshev_root * (1 + slack) && bc.chebyshev_root <= bc.restricted_root * (1 + slack) &&
             bc.restricted_root <= bc.zeta_next * (1 + slack);
  return bc;
}

std::vector<double> fekete_counting_convergence(const IntervalUnion& set, std::span<const int> n_list) {
  const EquilibriumMeasure eq = equilibrium(set);
  std::vector<double> out(n_list.size());
  parallel_for(n_list.size(), [&](std::size_t k) {
    const FeketeSet fk = fekete(set, n_list[k]);
    const std::vector<double> w(fk.points.size(), 1.0);
    out[k] = ks_distance(fk.points, w, [&](double x) { return eq.cdf(x); });
  });
  return out;
}

}  // namespace logpot
