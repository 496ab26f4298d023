#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "logpot/setgeom.hpp"

namespace logpot {

using Complex = std::complex<double>;

// Which endpoint factors (x - a)^{-1/2}, (b - x)^{-1/2} a density carries.
// The quadrature rule factors these out; the remainder must be smooth.
enum class EndpointSingularity { None, Left, Right, Both };

struct PointMass {
  double location{0.0};
  double weight{0.0};
};

struct AcComponent {
  Interval support;
  std::function<double(double)> density;
  EndpointSingularity singularity{EndpointSingularity::None};
};

// A positive measure: atoms plus absolutely continuous pieces.
struct MeasureSpec {
  std::vector<PointMass> point_masses;
  std::vector<AcComponent> ac_components;
};

// Weighted nodes standing in for a measure. `cells[k]` is the width of the
// interval a node represents (zero for atoms); it feeds the self-energy
// correction in coulomb_energy.
struct DiscretizedMeasure {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> cells;
  double total_mass{0.0};

  std::size_t size() const { return nodes.size(); }

  // Sorts, merges coincident nodes and recomputes the total mass.
  static DiscretizedMeasure from_atoms(std::vector<double> nodes, std::vector<double> weights);
};

DiscretizedMeasure discretize(const MeasureSpec& spec, std::size_t nodes_per_component);
// Node counts scaled per component so that integrals of squared polynomials
// up to `degree` stay accurate on finely split measures.
DiscretizedMeasure discretize_for_degree(const MeasureSpec& spec, std::size_t degree);

// sum_k w_k log|z - x_k|^{-1}; +infinity when z sits on a weighted node.
double log_potential(const DiscretizedMeasure& mu, Complex z);

// Discrete Coulomb energy with the analytic self-energy of each cell on the
// diagonal. +infinity if two weighted nodes coincide.
double coulomb_energy(const DiscretizedMeasure& mu);

// Kolmogorov-Smirnov distance between a discrete measure (normalized) and a
// continuous CDF.
double ks_distance(std::span<const double> sorted_nodes, std::span<const double> weights,
                   const std::function<double(double)>& cdf);
double ks_distance(const DiscretizedMeasure& mu, const std::function<double(double)>& cdf);

// Equilibrium measure of a finite interval union. On interval i the density
// is written in the angle variable x = c_i + r_i cos(theta), where it becomes
// (1/pi) H_i(theta) d(theta) with H_i smooth; H_i is stored as a cosine
// series, which makes the potential, CDF and Green's function closed-form sums.
class EquilibriumMeasure {
 public:
  const IntervalUnion& set() const { return set_; }
  const std::vector<double>& gap_zeros() const { return gap_zeros_; }
  double capacity() const { return capacity_; }
  // Largest |potential jump| across a gap after the solve.
  double residual() const { return residual_; }
  // Spread of exp(-potential) across the capacity cross-check points.
  double frostman_spread() const { return frostman_spread_; }
  int newton_iterations() const { return newton_iterations_; }

  // d(rho)/dx: +infinity at endpoints, 0 off the set.
  double density(double x) const;
  // Mass of interval i.
  double interval_mass(std::size_t i) const { return coefficients_[i].front(); }
  double total_mass() const;
  double cdf(double x) const;
  // Logarithmic potential of rho_E.
  double potential(Complex z) const;
  // Green's function with pole at infinity; clamped at 0 on the set.
  double green(Complex z) const;

  // Gauss-Chebyshev rule for integrals against rho_E, `per_interval` nodes on
  // each interval.
  DiscretizedMeasure quadrature(std::size_t per_interval) const;

  // Inverse CDF at the given probability levels (ascending).
  std::vector<double> quantiles(std::span<const double> levels) const;

 private:
  friend EquilibriumMeasure equilibrium(const IntervalUnion& set);

  explicit EquilibriumMeasure(IntervalUnion set) : set_(std::move(set)) {}

  double smooth_factor(std::size_t interval, double theta) const;
  double interval_cdf(std::size_t i, double x) const;

  IntervalUnion set_;
  std::vector<double> gap_zeros_;
  std::vector<std::vector<double>> coefficients_;
  double capacity_{0.0};
  double residual_{0.0};
  double frostman_spread_{0.0};
  int newton_iterations_{0};
};

// Solves for the gap zeros by damped Newton and assembles the measure.
EquilibriumMeasure equilibrium(const IntervalUnion& set);

double capacity(const IntervalUnion& set);
double green(const IntervalUnion& set, Complex z);

// Sup norm of f over E: dense grid per interval, then golden-section polish
// of every grid local maximum. Endpoints are always sampled.
double sup_norm_on_set(const std::function<double(double)>& abs_f, const IntervalUnion& set,
                       std::size_t grid_per_interval);

struct BernsteinWalshPoint {
  Complex z;
  double value{0.0};   // |p(z)|
  double bound{0.0};   // ||p||_E exp(n G_E(z))
  bool holds{false};
};

struct BernsteinWalshReport {
  double sup_norm{0.0};
  std::vector<BernsteinWalshPoint> points;
  double max_ratio{0.0};
  bool all_hold{true};
};

// Checks |p(z)| <= ||p||_E exp(n G_E(z)) for a polynomial with real
// coefficients given in ascending order.
BernsteinWalshReport bernstein_walsh_check(std::span<const double> coeffs, const IntervalUnion& set,
                                           std::span<const Complex> sample_points);

struct EquilibriumLimitReport {
  std::vector<double> capacities;
  // KS distance between consecutive equilibrium measures.
  std::vector<double> weak_distances;
};

EquilibriumLimitReport equilibrium_limit(std::span<const IntervalUnion> sequence);

// KS distance between two equilibrium measures, sampled at every endpoint and
// `per_interval` points inside each interval of both sets.
double equilibrium_ks_distance(const EquilibriumMeasure& a, const EquilibriumMeasure& b,
                               std::size_t per_interval = 64);

}  // namespace logpot
