#include "logpot/potential.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "logpot/error.hpp"
#include "logpot/parallel.hpp"
#include "logpot/quadrature.hpp"

namespace logpot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Accumulates a product of positive factors without overflow; the mantissa is
// renormalized every few factors.
class LogProduct {
 public:
  void mul(double v) {
    mant_ *= v;
    if (++count_ == 16) flush();
  }
  void div(double v) {
    mant_ /= v;
    if (++count_ == 16) flush();
  }
  double log() const { return std::log(mant_) + static_cast<double>(exp_) * std::numbers::ln2; }

 private:
  void flush() {
    int e = 0;
    mant_ = std::frexp(mant_, &e);
    exp_ += e;
    count_ = 0;
  }
  double mant_{1.0};
  long exp_{0};
  int count_{0};
};

void check_density_value(double v, double x) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::BadDensity, "density is negative or not finite at x = " + std::to_string(x));
  }
}

struct Node {
  double x;
  double w;
  double cell;
};

// Gauss-Chebyshev angle nodes theta_m = (m + 1/2) pi / n.
double cheb_angle(std::size_t m, std::size_t n) {
  return kPi * (static_cast<double>(m) + 0.5) / static_cast<double>(n);
}

// Node count for which a Gauss rule in the angle variable resolves a function
// analytic out to distance d beyond an interval of half-width r.
std::size_t angle_rule_size(double d, double r, double digits, std::size_t floor_n, std::size_t cap) {
  const double s = 1.0 + d / r;
  const double rho = s + std::sqrt(s * s - 1.0);
  const double need = digits / std::log(rho);
  if (!std::isfinite(need) || need > static_cast<double>(cap)) return cap;
  return std::max(floor_n, static_cast<std::size_t>(std::ceil(need)) + 8);
}

}  // namespace

DiscretizedMeasure DiscretizedMeasure::from_atoms(std::vector<double> nodes, std::vector<double> weights) {
  if (nodes.size() != weights.size()) throw Error(ErrorCode::BadInput, "nodes and weights differ in length");
  std::vector<Node> all;
  all.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!std::isfinite(nodes[k]) || !(weights[k] >= 0.0) || !std::isfinite(weights[k])) {
      throw Error(ErrorCode::BadInput, "atom with non-finite location or negative weight");
    }
    if (weights[k] > 0.0) all.push_back({nodes[k], weights[k], 0.0});
  }
  std::sort(all.begin(), all.end(), [](const Node& a, const Node& b) { return a.x < b.x; });
  DiscretizedMeasure out;
  for (const auto& n : all) {
    if (!out.nodes.empty() && out.nodes.back() == n.x) {
      out.weights.back() += n.w;
      continue;
    }
    out.nodes.push_back(n.x);
    out.weights.push_back(n.w);
    out.cells.push_back(0.0);
  }
  for (double w : out.weights) out.total_mass += w;
  return out;
}

namespace {

DiscretizedMeasure discretize_with(const MeasureSpec& spec,
                                   const std::function<std::size_t(const AcComponent&)>& nodes_for) {
  std::vector<Node> all;

  for (const auto& pm : spec.point_masses) {
    if (!std::isfinite(pm.location) || !(pm.weight > 0.0) || !std::isfinite(pm.weight)) {
      throw Error(ErrorCode::BadInput, "point mass needs a finite location and positive weight");
    }
    all.push_back({pm.location, pm.weight, 0.0});
  }

  // Built on first use per size; the Chebyshev branch needs neither.
  std::map<std::size_t, QuadratureRule> legendre_rules;
  auto legendre_rule = [&](std::size_t m) -> const QuadratureRule& {
    auto it = legendre_rules.find(m);
    if (it == legendre_rules.end()) it = legendre_rules.emplace(m, gauss_legendre(m)).first;
    return it->second;
  };

  for (const auto& comp : spec.ac_components) {
    const double a = comp.support.lo;
    const double b = comp.support.hi;
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
      throw Error(ErrorCode::MalformedInterval, "a.c. component needs a < b");
    }
    if (!comp.density) throw Error(ErrorCode::BadDensity, "a.c. component has no density");
    const std::size_t n = nodes_for(comp);
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    const double len = b - a;
    std::vector<Node> piece;
    piece.reserve(n);

    switch (comp.singularity) {
      case EndpointSingularity::None: {
        const QuadratureRule& legendre = legendre_rule(n);
        for (std::size_t k = 0; k < n; ++k) {
          const double y = c + r * legendre.nodes[k];
          const double f = comp.density(y);
          check_density_value(f, y);
          piece.push_back({y, r * legendre.weights[k] * f, 0.0});
        }
        break;
      }
      case EndpointSingularity::Both:
        for (std::size_t m = n; m-- > 0;) {
          const double theta = cheb_angle(m, n);
          const double y = c + r * std::cos(theta);
          const double f = comp.density(y);
          check_density_value(f, y);
          piece.push_back({y, kPi / static_cast<double>(n) * f * r * std::sin(theta), 0.0});
        }
        break;
      case EndpointSingularity::Left:
      case EndpointSingularity::Right: {
        // y = a + len s^2 (or b - len s^2): the inverse square root is absorbed
        // into ds and the even 2n-point Legendre rule is exact on the half line.
        const bool left = comp.singularity == EndpointSingularity::Left;
        const QuadratureRule& legendre_even = legendre_rule(2 * n);
        for (std::size_t k = 0; k < n; ++k) {
          const double s = legendre_even.nodes[n + k];
          const double w = legendre_even.weights[n + k];
          const double y = left ? a + len * s * s : b - len * s * s;
          const double f = comp.density(y);
          check_density_value(f, y);
          piece.push_back({y, 2.0 * len * s * w * f, 0.0});
        }
        if (!left) std::reverse(piece.begin(), piece.end());
        break;
      }
    }

    // Voronoi cells inside the component.
    for (std::size_t k = 0; k < piece.size(); ++k) {
      const double lo = k == 0 ? a : 0.5 * (piece[k - 1].x + piece[k].x);
      const double hi = k + 1 == piece.size() ? b : 0.5 * (piece[k].x + piece[k + 1].x);
      piece[k].cell = hi - lo;
    }
    for (const auto& p : piece) {
      if (p.w > 0.0) all.push_back(p);
    }
  }

  std::stable_sort(all.begin(), all.end(), [](const Node& x, const Node& y) { return x.x < y.x; });
  DiscretizedMeasure out;
  for (const auto& p : all) {
    if (!out.nodes.empty() && out.nodes.back() == p.x) {
      out.weights.back() += p.w;
      out.cells.back() += p.cell;
      continue;
    }
    out.nodes.push_back(p.x);
    out.weights.push_back(p.w);
    out.cells.push_back(p.cell);
  }
  for (double w : out.weights) out.total_mass += w;
  return out;
}

}  // namespace

DiscretizedMeasure discretize(const MeasureSpec& spec, std::size_t nodes_per_component) {
  if (nodes_per_component < 2) throw Error(ErrorCode::BadInput, "nodes_per_component must be at least 2");
  return discretize_with(spec, [&](const AcComponent&) { return nodes_per_component; });
}

DiscretizedMeasure discretize_for_degree(const MeasureSpec& spec, std::size_t degree) {
  double lo = kInf;
  double hi = -kInf;
  for (const auto& c : spec.ac_components) {
    lo = std::min(lo, c.support.lo);
    hi = std::max(hi, c.support.hi);
  }
  const double mid = 0.5 * (lo + hi);
  const double half = hi > lo ? 0.5 * (hi - lo) : 1.0;
  // Orthogonal polynomials of degree d oscillate about d / pi times per unit
  // of arccos angle across the hull; each piece gets three nodes per
  // oscillation plus a floor.
  auto angle = [&](double x) { return std::acos(std::clamp((x - mid) / half, -1.0, 1.0)); };
  return discretize_with(spec, [&](const AcComponent& c) {
    const double span = angle(c.support.lo) - angle(c.support.hi);
    return static_cast<std::size_t>(12.0 + std::ceil(3.0 * static_cast<double>(degree) * span / kPi));
  });
}

double log_potential(const DiscretizedMeasure& mu, Complex z) {
  double sum = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double d = std::abs(z - mu.nodes[k]);
    if (d <= 1e-14 * std::max(1.0, std::abs(mu.nodes[k]))) {
      if (mu.weights[k] > 0.0) return kInf;
      continue;
    }
    sum -= mu.weights[k] * std::log(d);
  }
  return sum;
}

double coulomb_energy(const DiscretizedMeasure& mu) {
  const std::size_t n = mu.size();
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double wk = mu.weights[k];
    if (wk <= 0.0) continue;
    double row = 0.0;
    for (std::size_t l = k + 1; l < n; ++l) {
      if (mu.weights[l] <= 0.0) continue;
      const double d = std::abs(mu.nodes[l] - mu.nodes[k]);
      if (d == 0.0) return kInf;
      row -= mu.weights[l] * std::log(d);
    }
    total += 2.0 * wk * row;
    // Uniform mass on a cell of width h has energy 3/2 - log h.
    const double h = k < mu.cells.size() ? mu.cells[k] : 0.0;
    if (h > 0.0) total += wk * wk * (1.5 - std::log(h));
  }
  return total;
}

double ks_distance(std::span<const double> sorted_nodes, std::span<const double> weights,
                   const std::function<double(double)>& cdf) {
  if (sorted_nodes.size() != weights.size() || sorted_nodes.empty()) {
    throw Error(ErrorCode::BadInput, "KS distance needs matching, nonempty nodes and weights");
  }
  double mass = 0.0;
  for (double w : weights) mass += w;
  if (!(mass > 0.0)) throw Error(ErrorCode::BadInput, "KS distance needs positive total mass");
  double acc = 0.0;
  double worst = 0.0;
  std::size_t k = 0;
  while (k < sorted_nodes.size()) {
    const double x = sorted_nodes[k];
    const double before = acc / mass;
    while (k < sorted_nodes.size() && sorted_nodes[k] == x) acc += weights[k++];
    const double after = std::min(1.0, acc / mass);
    const double f = cdf(x);
    worst = std::max({worst, std::abs(f - before), std::abs(f - after)});
  }
  return worst;
}

double ks_distance(const DiscretizedMeasure& mu, const std::function<double(double)>& cdf) {
  return ks_distance(mu.nodes, mu.weights, cdf);
}

// ---------------------------------------------------------------------------
// Equilibrium measure

namespace {

struct GapSystem {
  std::vector<double> ends;    // a_0, b_0, a_1, b_1, ...
  std::vector<std::size_t> rule_size;
  std::vector<std::vector<double>> cos_nodes;

  std::size_t gaps() const { return rule_size.size(); }
  double lo(std::size_t j) const { return ends[2 * j + 1]; }
  double hi(std::size_t j) const { return ends[2 * j + 2]; }
};

// log of prod_{m != skip_zero} |t - x_m| / sqrt(prod_{e not in skip} |t - e|).
double log_factor(double t, std::span<const double> ends, std::span<const double> zeros, std::size_t skip_lo,
                  std::size_t skip_zero) {
  LogProduct num;
  for (std::size_t m = 0; m < zeros.size(); ++m) {
    if (m != skip_zero) num.mul(std::abs(t - zeros[m]));
  }
  LogProduct den;
  for (std::size_t e = 0; e < ends.size(); ++e) {
    if (e != skip_lo && e != skip_lo + 1) den.mul(std::abs(t - ends[e]));
  }
  return num.log() - 0.5 * den.log();
}

struct GapEval {
  std::vector<double> residual;  // row-scaled jump across each gap
  std::vector<double> size;      // row-scaled magnitude, for relative tests
  std::vector<double> log_scale;
  Eigen::MatrixXd jacobian;
};

GapEval evaluate_gaps(const GapSystem& sys, std::span<const double> x, bool with_jacobian) {
  const std::size_t g = sys.gaps();
  GapEval ev;
  ev.residual.assign(g, 0.0);
  ev.size.assign(g, 0.0);
  ev.log_scale.assign(g, 0.0);
  if (with_jacobian) ev.jacobian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(g));

  parallel_for(g, [&](std::size_t j) {
    const double c = 0.5 * (sys.lo(j) + sys.hi(j));
    const double r = 0.5 * (sys.hi(j) - sys.lo(j));
    const auto& cs = sys.cos_nodes[j];
    const std::size_t n = cs.size();
    std::vector<double> t(n);
    std::vector<double> s(n);
    double smax = -kInf;
    for (std::size_t m = 0; m < n; ++m) {
      t[m] = c + r * cs[m];
      s[m] = log_factor(t[m], sys.ends, x, 2 * j + 1, j);
      smax = std::max(smax, s[m]);
    }
    double res = 0.0;
    double mag = 0.0;
    double diag = 0.0;
    std::vector<double> off(with_jacobian ? g : 0, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      const double e = std::exp(s[m] - smax);
      const double lin = t[m] - x[j];
      res += lin * e;
      mag += std::abs(lin) * e;
      if (with_jacobian) {
        diag -= e;
        for (std::size_t k = 0; k < g; ++k) {
          if (k != j) off[k] -= lin * e / (t[m] - x[k]);
        }
      }
    }
    const double q = kPi / static_cast<double>(n);
    ev.residual[j] = q * res;
    ev.size[j] = q * mag;
    ev.log_scale[j] = smax;
    if (with_jacobian) {
      const auto jj = static_cast<Eigen::Index>(j);
      for (std::size_t k = 0; k < g; ++k) {
        ev.jacobian(jj, static_cast<Eigen::Index>(k)) = q * (k == j ? diag : off[k]);
      }
    }
  });
  return ev;
}

double relative_residual(const GapEval& ev) {
  double worst = 0.0;
  for (std::size_t j = 0; j < ev.residual.size(); ++j) {
    worst = std::max(worst, std::abs(ev.residual[j]) / ev.size[j]);
  }
  return worst;
}

}  // namespace

double EquilibriumMeasure::smooth_factor(std::size_t i, double theta) const {
  const double t = set_[i].mid() + set_[i].half_width() * std::cos(theta);
  std::vector<double> ends;
  ends.reserve(2 * set_.size());
  for (const auto& iv : set_.intervals()) {
    ends.push_back(iv.lo);
    ends.push_back(iv.hi);
  }
  return std::exp(log_factor(t, ends, gap_zeros_, 2 * i, gap_zeros_.size()));
}

EquilibriumMeasure equilibrium(const IntervalUnion& set) {
  EquilibriumMeasure eq(set);
  const std::size_t L = set.size();
  std::vector<double> ends;
  ends.reserve(2 * L);
  for (const auto& iv : set.intervals()) {
    ends.push_back(iv.lo);
    ends.push_back(iv.hi);
  }

  if (L > 1) {
    GapSystem sys;
    sys.ends = ends;
    const std::size_t g = L - 1;
    sys.rule_size.resize(g);
    sys.cos_nodes.resize(g);
    for (std::size_t j = 0; j < g; ++j) {
      const double r = 0.5 * set.gap(j).length();
      const double d = std::min(set[j].length(), set[j + 1].length());
      const std::size_t n = angle_rule_size(d, r, 0.5 * 40.0, 16, 1u << 14);
      sys.rule_size[j] = n;
      sys.cos_nodes[j].resize(n);
      for (std::size_t m = 0; m < n; ++m) sys.cos_nodes[j][m] = std::cos(cheb_angle(m, n));
    }

    std::vector<double> x(g);
    for (std::size_t j = 0; j < g; ++j) x[j] = set.gap(j).mid();

    GapEval ev = evaluate_gaps(sys, x, true);
    double merit = relative_residual(ev);
    int iter = 0;
    constexpr int kMaxIter = 100;
    bool converged = merit <= 1e-13;
    while (!converged && iter < kMaxIter) {
      ++iter;
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(g));
      for (std::size_t j = 0; j < g; ++j) rhs(static_cast<Eigen::Index>(j)) = -ev.residual[j];
      const Eigen::VectorXd dx = ev.jacobian.partialPivLu().solve(rhs);

      // Stay inside the gaps: move at most 90% of the way to a gap end.
      double lambda = 1.0;
      for (std::size_t j = 0; j < g; ++j) {
        const double step = dx(static_cast<Eigen::Index>(j));
        if (!std::isfinite(step)) {
          lambda = 0.0;
          break;
        }
        const double room = step > 0 ? sys.hi(j) - x[j] : x[j] - sys.lo(j);
        if (std::abs(step) > 0.9 * room) lambda = std::min(lambda, 0.9 * room / std::abs(step));
      }
      if (lambda == 0.0) break;

      std::vector<double> trial(g);
      GapEval trial_ev;
      double trial_merit = kInf;
      for (int halving = 0; halving < 40; ++halving) {
        for (std::size_t j = 0; j < g; ++j) trial[j] = x[j] + lambda * dx(static_cast<Eigen::Index>(j));
        trial_ev = evaluate_gaps(sys, trial, false);
        trial_merit = relative_residual(trial_ev);
        if (trial_merit < merit || trial_merit <= 1e-13) break;
        lambda *= 0.5;
      }
      double step_size = 0.0;
      for (std::size_t j = 0; j < g; ++j) {
        step_size = std::max(step_size, std::abs(trial[j] - x[j]) / set.gap(j).length());
      }
      const bool improved = trial_merit < merit;
      if (improved) {
        x = trial;
        merit = trial_merit;
      }
      if (merit <= 1e-13) {
        converged = true;
        break;
      }
      if (!improved || step_size < 1e-15) {
        converged = merit <= 1e-10;
        break;
      }
      ev = evaluate_gaps(sys, x, true);
    }
    if (!converged) {
      throw Error(ErrorCode::SolveFailed, "gap-zero Newton solve did not converge; relative residual " +
                                              std::to_string(merit) + " after " + std::to_string(iter) +
                                              " iterations");
    }
    const GapEval fin = evaluate_gaps(sys, x, false);
    double res = 0.0;
    for (std::size_t j = 0; j < g; ++j) {
      res = std::max(res, std::abs(fin.residual[j]) * std::exp(fin.log_scale[j]));
    }
    eq.gap_zeros_ = std::move(x);
    eq.residual_ = res;
    eq.newton_iterations_ = iter;
  }

  // Cosine coefficients of the smooth factor on each interval.
  eq.coefficients_.resize(L);
  parallel_for(L, [&](std::size_t i) {
    const double c = set[i].mid();
    const double r = set[i].half_width();
    double d = kInf;
    if (i > 0) d = std::min(d, set.gap(i - 1).length());
    if (i + 1 < L) d = std::min(d, set.gap(i).length());
    std::size_t n = L == 1 ? 1 : angle_rule_size(d, r, 40.0, 32, 1u << 13);
    std::vector<double> h;
    for (;;) {
      std::vector<double> vals(n);
      for (std::size_t m = 0; m < n; ++m) {
        const double t = c + r * std::cos(cheb_angle(m, n));
        vals[m] = std::exp(log_factor(t, ends, eq.gap_zeros_, 2 * i, eq.gap_zeros_.size()));
      }
      h.assign(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        // cos(k theta_m) by rotation; theta_m = (m + 1/2) pi / n.
        const double step = kPi * static_cast<double>(k) / static_cast<double>(n);
        const Complex rot(std::cos(step), std::sin(step));
        Complex cur(std::cos(0.5 * step), std::sin(0.5 * step));
        for (std::size_t m = 0; m < n; ++m) {
          sum += vals[m] * cur.real();
          cur *= rot;
          if ((m & 63) == 63) cur /= std::abs(cur);
        }
        h[k] = (k == 0 ? 1.0 : 2.0) * sum / static_cast<double>(n);
      }
      double tail = 0.0;
      for (std::size_t k = n / 2; k < n; ++k) tail = std::max(tail, std::abs(h[k]));
      if (n == 1 || tail <= 1e-13 * h[0] || n >= (1u << 13)) break;
      n *= 2;
    }
    std::size_t keep = h.size();
    while (keep > 1 && std::abs(h[keep - 1]) <= 1e-18 * h[0]) --keep;
    h.resize(keep);
    eq.coefficients_[i] = std::move(h);
  });

  // Capacity from Frostman equality at interior points.
  const std::size_t li = set.longest_interval();
  const double x0 = set[li].mid();
  eq.capacity_ = std::exp(-eq.potential(Complex(x0, 0.0)));
  std::vector<double> checks;
  checks.push_back(set[0].mid());
  checks.push_back(set[L - 1].mid());
  checks.push_back(set[li].mid() + 0.5 * set[li].half_width());
  double lo = eq.capacity_;
  double hi = eq.capacity_;
  for (double p : checks) {
    const double c = std::exp(-eq.potential(Complex(p, 0.0)));
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  eq.frostman_spread_ = hi - lo;
  return eq;
}

double EquilibriumMeasure::density(double x) const {
  const std::size_t i = set_.locate(x);
  if (i >= set_.size()) return 0.0;
  const Interval& iv = set_[i];
  if (x == iv.lo || x == iv.hi) return kInf;
  std::vector<double> ends;
  ends.reserve(2 * set_.size());
  for (const auto& v : set_.intervals()) {
    ends.push_back(v.lo);
    ends.push_back(v.hi);
  }
  const double own = 0.5 * (std::log(x - iv.lo) + std::log(iv.hi - x));
  return std::exp(log_factor(x, ends, gap_zeros_, 2 * i, gap_zeros_.size()) - own) / kPi;
}

double EquilibriumMeasure::total_mass() const {
  double m = 0.0;
  for (const auto& h : coefficients_) m += h.front();
  return m;
}

double EquilibriumMeasure::interval_cdf(std::size_t i, double x) const {
  const double c = set_[i].mid();
  const double r = set_[i].half_width();
  const double w = std::clamp((x - c) / r, -1.0, 1.0);
  const double phi = std::acos(w);
  const auto& h = coefficients_[i];
  double sum = h[0] * (kPi - phi);
  const Complex rot(std::cos(phi), std::sin(phi));
  Complex cur = rot;
  for (std::size_t k = 1; k < h.size(); ++k) {
    sum -= h[k] * cur.imag() / static_cast<double>(k);
    cur *= rot;
  }
  return std::max(0.0, sum / kPi);
}

double EquilibriumMeasure::cdf(double x) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < set_.size(); ++i) {
    if (x >= set_[i].hi) {
      acc += coefficients_[i].front();
      continue;
    }
    if (x > set_[i].lo) acc += std::min(interval_cdf(i, x), coefficients_[i].front());
    break;
  }
  return std::clamp(acc, 0.0, 1.0);
}

double EquilibriumMeasure::potential(Complex z) const {
  double total = 0.0;
  for (std::size_t i = 0; i < set_.size(); ++i) {
    const double c = set_[i].mid();
    const double r = set_[i].half_width();
    const auto& h = coefficients_[i];
    const Complex w = (z - c) / r;
    double log_u = 0.0;
    double series = 0.0;
    if (w.imag() == 0.0 && std::abs(w.real()) <= 1.0) {
      // On the interval: u = e^{i phi}.
      const double phi = std::acos(w.real());
      const Complex rot(std::cos(phi), -std::sin(phi));
      Complex cur = rot;
      for (std::size_t k = 1; k < h.size(); ++k) {
        series += h[k] * cur.real() / static_cast<double>(k);
        cur *= rot;
      }
    } else {
      Complex u;
      if (w.imag() == 0.0) {
        const double wr = w.real();
        u = Complex(wr + std::copysign(std::sqrt((wr - 1.0) * (wr + 1.0)), wr), 0.0);
      } else {
        u = w + std::sqrt(w - 1.0) * std::sqrt(w + 1.0);
        if (std::abs(u) < 1.0) u = 1.0 / u;
      }
      log_u = std::log(std::abs(u));
      const Complex q = 1.0 / u;
      const double qa = std::abs(q);
      Complex cur = q;
      double mag = qa;
      for (std::size_t k = 1; k < h.size(); ++k) {
        series += h[k] * cur.real() / static_cast<double>(k);
        cur *= q;
        mag *= qa;
        if (mag < 1e-18) break;
      }
    }
    total += -h[0] * (std::log(0.5 * r) + log_u) + series;
  }
  return total;
}

double EquilibriumMeasure::green(Complex z) const {
  return std::max(0.0, -potential(z) - std::log(capacity_));
}

DiscretizedMeasure EquilibriumMeasure::quadrature(std::size_t per_interval) const {
  if (per_interval < 1) throw Error(ErrorCode::BadInput, "quadrature needs at least one node per interval");
  DiscretizedMeasure out;
  const std::size_t n = per_interval;
  for (std::size_t i = 0; i < set_.size(); ++i) {
    const double c = set_[i].mid();
    const double r = set_[i].half_width();
    for (std::size_t m = n; m-- > 0;) {
      const double theta = cheb_angle(m, n);
      const double th_lo = kPi * static_cast<double>(m + 1) / static_cast<double>(n);
      const double th_hi = kPi * static_cast<double>(m) / static_cast<double>(n);
      out.nodes.push_back(c + r * std::cos(theta));
      out.weights.push_back(smooth_factor(i, theta) / static_cast<double>(n));
      out.cells.push_back(r * (std::cos(th_hi) - std::cos(th_lo)));
    }
  }
  for (double w : out.weights) out.total_mass += w;
  return out;
}

std::vector<double> EquilibriumMeasure::quantiles(std::span<const double> levels) const {
  std::vector<double> out;
  out.reserve(levels.size());
  for (double p : levels) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::BadInput, "quantile level outside [0, 1]");
    double left = 0.0;
    std::size_t i = 0;
    while (i + 1 < set_.size() && left + coefficients_[i].front() < p) {
      left += coefficients_[i].front();
      ++i;
    }
    const double target = p - left;
    // Mass to the left of angle phi decreases in phi; bisect in phi.
    double lo = 0.0;
    double hi = kPi;
    const double c = set_[i].mid();
    const double r = set_[i].half_width();
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double m = interval_cdf(i, c + r * std::cos(mid));
      if (m > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.push_back(c + r * std::cos(0.5 * (lo + hi)));
  }
  return out;
}

double capacity(const IntervalUnion& set) { return equilibrium(set).capacity(); }

double green(const IntervalUnion& set, Complex z) { return equilibrium(set).green(z); }

double sup_norm_on_set(const std::function<double(double)>& abs_f, const IntervalUnion& set,
                       std::size_t grid_per_interval) {
  const std::size_t n = std::max<std::size_t>(grid_per_interval, 2);
  double best = 0.0;
  for (const auto& iv : set.intervals()) {
    std::vector<double> xs(n + 1);
    std::vector<double> fs(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      // Chebyshev-spaced grid clusters near the ends where polynomials move fastest.
      xs[k] = k == 0 ? iv.lo : k == n ? iv.hi
                                      : iv.mid() - iv.half_width() * std::cos(kPi * static_cast<double>(k) /
                                                                             static_cast<double>(n));
      fs[k] = abs_f(xs[k]);
      best = std::max(best, fs[k]);
    }
    for (std::size_t k = 1; k < n; ++k) {
      if (fs[k] < fs[k - 1] || fs[k] < fs[k + 1]) continue;
      double a = xs[k - 1];
      double b = xs[k + 1];
      const double g = 0.5 * (3.0 - std::sqrt(5.0));
      double x1 = a + g * (b - a);
      double x2 = b - g * (b - a);
      double f1 = abs_f(x1);
      double f2 = abs_f(x2);
      for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        if (f1 > f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = a + g * (b - a);
          f1 = abs_f(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = b - g * (b - a);
          f2 = abs_f(x2);
        }
      }
      best = std::max({best, f1, f2});
    }
  }
  return best;
}

BernsteinWalshReport bernstein_walsh_check(std::span<const double> coeffs, const IntervalUnion& set,
                                           std::span<const Complex> sample_points) {
  std::size_t deg = coeffs.size();
  while (deg > 0 && coeffs[deg - 1] == 0.0) --deg;
  if (deg < 2) throw Error(ErrorCode::BadInput, "Bernstein-Walsh check needs degree at least 1");
  const std::size_t n = deg - 1;
  auto eval = [&](Complex z) {
    Complex acc = 0.0;
    for (std::size_t k = deg; k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
  };
  BernsteinWalshReport rep;
  rep.sup_norm = sup_norm_on_set([&](double x) { return std::abs(eval(Complex(x, 0.0))); }, set,
                                 std::max<std::size_t>(1024, 64 * n));
  const EquilibriumMeasure eq = equilibrium(set);
  rep.points.resize(sample_points.size());
  parallel_for(sample_points.size(), [&](std::size_t k) {
    BernsteinWalshPoint& p = rep.points[k];
    p.z = sample_points[k];
    p.value = std::abs(eval(p.z));
    p.bound = rep.sup_norm * std::exp(static_cast<double>(n) * eq.green(p.z));
    p.holds = p.value <= p.bound * (1.0 + 1e-8);
  });
  for (const auto& p : rep.points) {
    const double ratio = p.bound > 0.0 ? p.value / p.bound : (p.value > 0.0 ? kInf : 0.0);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.all_hold = rep.all_hold && p.holds;
  }
  return rep;
}

double equilibrium_ks_distance(const EquilibriumMeasure& a, const EquilibriumMeasure& b, std::size_t per_interval) {
  double worst = 0.0;
  auto probe = [&](double x) { worst = std::max(worst, std::abs(a.cdf(x) - b.cdf(x))); };
  for (const EquilibriumMeasure* m : {&a, &b}) {
    for (const auto& iv : m->set().intervals()) {
      probe(iv.lo);
      probe(iv.hi);
      for (std::size_t k = 1; k < per_interval; ++k) {
        probe(iv.lo + iv.length() * static_cast<double>(k) / static_cast<double>(per_interval));
      }
    }
  }
  return worst;
}

EquilibriumLimitReport equilibrium_limit(std::span<const IntervalUnion> sequence) {
  for (std::size_t k = 1; k < sequence.size(); ++k) {
    if (!sequence[k].is_subset_of(sequence[k - 1])) {
      throw Error(ErrorCode::NotNested, "set " + std::to_string(k) + " is not contained in set " + std::to_string(k - 1));
    }
  }
  std::vector<EquilibriumMeasure> eqs;
  eqs.reserve(sequence.size());
  for (const auto& s : sequence) eqs.push_back(equilibrium(s));
  EquilibriumLimitReport rep;
  for (const auto& e : eqs) rep.capacities.push_back(e.capacity());
  for (std::size_t k = 1; k < eqs.size(); ++k) rep.weak_distances.push_back(equilibrium_ks_distance(eqs[k - 1], eqs[k]));
  return rep;
}

}  // namespace logpot
