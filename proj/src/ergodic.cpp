#include "logpot/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "logpot/error.hpp"
#include "logpot/opuc.hpp"
#include "logpot/parallel.hpp"
#include "logpot/quadrature.hpp"
#include "logpot/tridiag.hpp"

namespace logpot {

namespace {

using cd = std::complex<double>;

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void require_samples(std::size_t n_samples) {
  if (n_samples == 0) throw Error(ErrorCode::BadInput, "n_samples must be >= 1");
}

std::vector<JacobiParams> sample_batch(const ErgodicFamily& f, std::size_t n, std::size_t n_samples) {
  require_samples(n_samples);
  std::vector<JacobiParams> out(n_samples);
  parallel_for(n_samples, [&](std::size_t k) { out[k] = sample(f, n, k, n_samples); });
  return out;
}

struct MeanStd {
  double mean{0.0};
  double std_error{0.0};
};

// Fixed summation order keeps results independent of the thread count.
MeanStd mean_and_error(const std::vector<double>& v) {
  MeanStd r;
  for (double x : v) r.mean += x;
  r.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return r;
}

}  // namespace

ErgodicFamily ErgodicFamily::free_family() { return ErgodicFamily{}; }

ErgodicFamily ErgodicFamily::anderson(double b_lo, double b_hi, std::uint64_t seed, double a) {
  if (!(b_lo <= b_hi) || !(a > 0.0)) throw Error(ErrorCode::BadInput, "anderson needs b_lo <= b_hi and a > 0");
  ErgodicFamily f;
  f.kind = FamilyKind::Anderson;
  f.a = a;
  f.b_lo = b_lo;
  f.b_hi = b_hi;
  f.seed = seed;
  return f;
}

ErgodicFamily ErgodicFamily::almost_mathieu(double lambda, double freq, double phase) {
  ErgodicFamily f;
  f.kind = FamilyKind::AlmostMathieu;
  f.lambda = lambda;
  f.freq = freq;
  f.phase = phase;
  return f;
}

ErgodicFamily ErgodicFamily::decaying_random(double lambda, double decay, std::uint64_t seed) {
  if (!(lambda > 0.0) || !(decay > 0.0 && decay < 1.0)) {
    throw Error(ErrorCode::BadInput, "decaying random model needs lambda > 0 and 0 < gamma < 1");
  }
  ErgodicFamily f;
  f.kind = FamilyKind::DecayingRandom;
  f.lambda = lambda;
  f.decay = decay;
  f.seed = seed;
  return f;
}

double golden_frequency() { return std::numbers::pi * (std::sqrt(5.0) - 1.0); }

std::uint64_t seed_for(std::uint64_t seed, std::size_t sample) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(sample) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

JacobiParams sample(const ErgodicFamily& f, std::size_t n, std::size_t sample, std::size_t batch) {
  if (n > 10'000'000) throw Error(ErrorCode::BadInput, "sample length above 1e7");
  if (batch == 0 || sample >= batch) throw Error(ErrorCode::BadInput, "sample index outside the batch");
  JacobiParams j{std::vector<double>(n, f.a), std::vector<double>(n, 0.0)};
  std::mt19937_64 rng(seed_for(f.seed, sample));
  switch (f.kind) {
    case FamilyKind::Free:
      std::fill(j.a.begin(), j.a.end(), 1.0);
      break;
    case FamilyKind::Anderson:
      for (auto& b : j.b) b = f.b_lo + (f.b_hi - f.b_lo) * unit_double(rng);
      break;
    case FamilyKind::AlmostMathieu: {
      const double theta =
          f.phase + 2.0 * std::numbers::pi * static_cast<double>(sample) / static_cast<double>(batch);
      for (std::size_t k = 0; k < n; ++k) j.b[k] = f.lambda * std::cos(static_cast<double>(k + 1) * f.freq + theta);
      break;
    }
    case FamilyKind::DecayingRandom:
      std::fill(j.a.begin(), j.a.end(), 1.0);
      for (std::size_t k = 0; k < n; ++k) {
        j.b[k] = f.lambda * std::pow(static_cast<double>(k + 1), -f.decay) * (2.0 * unit_double(rng) - 1.0);
      }
      break;
    case FamilyKind::Custom: {
      if (!f.custom) throw Error(ErrorCode::BadInput, "custom family without a sampler");
      j = f.custom(n, sample);
      if (j.a.size() < n || j.b.size() < n) throw Error(ErrorCode::BadInput, "custom sampler returned too few parameters");
      j.a.resize(n);
      j.b.resize(n);
      for (double a : j.a) {
        if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::BadInput, "custom sampler produced a_n <= 0");
      }
      break;
    }
  }
  return j;
}

double log_transfer_norm(const JacobiParams& j, std::size_t n, cd z) {
  if (n == 0) throw Error(ErrorCode::BadInput, "transfer product needs n >= 1");
  if (j.a.size() < n || j.b.size() < n) throw Error(ErrorCode::BadInput, "transfer product longer than the parameters");
  // Columns (m00, m10) and (m01, m11).
  cd m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
  double log_scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = j.a[k];
    const cd d = (z - j.b[k]) / a;
    const double inv = 1.0 / a;
    const cd n00 = d * m00 - inv * m10, n01 = d * m01 - inv * m11;
    const cd n10 = a * m00, n11 = a * m01;
    m00 = n00;
    m01 = n01;
    m10 = n10;
    m11 = n11;
    if ((k & 31) == 31 || k + 1 == n) {
      const double c0 = std::sqrt(std::norm(m00) + std::norm(m10));
      const double c1 = std::sqrt(std::norm(m01) + std::norm(m11));
      const double s = std::max(c0, c1);
      if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::NumericalFailure, "transfer product overflowed");
      m00 /= s;
      m01 /= s;
      m10 /= s;
      m11 /= s;
      log_scale += std::log(s);
    }
  }
  // Largest singular value of the 2x2 remainder.
  const double fro = std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11);
  const double det = std::norm(m00 * m11 - m01 * m10);
  const double sigma2 = 0.5 * (fro + std::sqrt(std::max(0.0, fro * fro - 4.0 * det)));
  return (log_scale + 0.5 * std::log(sigma2)) / static_cast<double>(n);
}

LyapunovEstimate lyapunov(const ErgodicFamily& f, cd z, std::size_t n, std::size_t n_samples) {
  const auto batch = sample_batch(f, n, n_samples);
  LyapunovEstimate r;
  r.per_sample.resize(n_samples);
  parallel_for(n_samples, [&](std::size_t k) { r.per_sample[k] = log_transfer_norm(batch[k], n, z); });
  const auto ms = mean_and_error(r.per_sample);
  r.gamma = ms.mean;
  r.std_error = ms.std_error;
  return r;
}

DiscretizedMeasure density_of_states(const ErgodicFamily& f, std::size_t n, std::size_t n_samples) {
  if (n == 0) throw Error(ErrorCode::BadInput, "density of states needs n >= 1");
  const auto batch = sample_batch(f, n, n_samples);
  std::vector<std::vector<double>> eig(n_samples);
  parallel_for(n_samples, [&](std::size_t k) {
    const auto& j = batch[k];
    eig[k] = tridiagonal_eigenvalues_qr(j.b, std::span<const double>(j.a.data(), n - 1));
  });
  std::vector<double> nodes;
  nodes.reserve(n * n_samples);
  for (const auto& e : eig) nodes.insert(nodes.end(), e.begin(), e.end());
  std::vector<double> weights(nodes.size(), 1.0 / static_cast<double>(n * n_samples));
  return DiscretizedMeasure::from_atoms(std::move(nodes), std::move(weights));
}

double geometric_mean_a(const ErgodicFamily& f, std::size_t n, std::size_t n_samples) {
  if (n == 0) throw Error(ErrorCode::BadInput, "geometric mean needs n >= 1");
  const auto batch = sample_batch(f, n, n_samples);
  double s = 0.0;
  for (const auto& j : batch) {
    for (std::size_t k = 0; k < n; ++k) s += std::log(j.a[k]);
  }
  return std::exp(s / static_cast<double>(n * n_samples));
}

ThoulessReport thouless_check(const ErgodicFamily& f, std::span<const cd> z_list, std::size_t n,
                              std::size_t n_samples) {
  ThoulessReport r;
  const auto dos = density_of_states(f, n, n_samples);
  r.log_inv_a = -std::log(geometric_mean_a(f, n, n_samples));
  for (const cd z : z_list) {
    if (z.imag() == 0.0 && z.real() >= dos.nodes.front() && z.real() <= dos.nodes.back()) {
      throw Error(ErrorCode::BadInput, "Thouless check point lies on the spectrum hull");
    }
    const double g = lyapunov(f, z, n, n_samples).gamma;
    const double pot = -log_potential(dos, z);
    const double res = std::abs(g - r.log_inv_a - pot);
    r.z.push_back(z);
    r.gamma.push_back(g);
    r.log_potential.push_back(pot);
    r.residual.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
  return r;
}

IntervalUnion estimate_spectrum(const DiscretizedMeasure& dos, std::size_t n, std::size_t n_samples,
                                double gap_factor) {
  if (dos.size() == 0) throw Error(ErrorCode::EmptySet, "empty density of states");
  if (n == 0 || n_samples == 0 || !(gap_factor > 0.0)) throw Error(ErrorCode::BadInput, "bad spectrum estimate knobs");
  const double gap = gap_factor / static_cast<double>(n);
  const double min_weight = 0.5 / static_cast<double>(n * n_samples) * dos.total_mass;
  const double min_width = 1.0 / static_cast<double>(n);
  std::vector<std::pair<double, double>> pieces;
  std::size_t start = 0;
  for (std::size_t k = 1; k <= dos.size(); ++k) {
    if (k < dos.size() && dos.nodes[k] - dos.nodes[k - 1] <= gap) continue;
    double w = 0.0;
    for (std::size_t i = start; i < k; ++i) w += dos.weights[i];
    if (w >= min_weight * (1.0 - 1e-12)) {
      double lo = dos.nodes[start], hi = dos.nodes[k - 1];
      if (hi - lo < min_width) {
        const double c = 0.5 * (lo + hi);
        lo = c - 0.5 * min_width;
        hi = c + 0.5 * min_width;
      }
      pieces.emplace_back(lo, hi);
    }
    start = k;
  }
  return IntervalUnion::normalize(pieces);
}

RegularityIdentityReport regularity_identity_check(const ErgodicFamily& f, const IntervalUnion& e, std::size_t n,
                                                   std::size_t n_samples, double epsilon,
                                                   std::size_t per_interval) {
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::BadInput, "epsilon must be >= 0");
  if (per_interval == 0) throw Error(ErrorCode::BadInput, "per_interval must be >= 1");
  RegularityIdentityReport r;
  r.epsilon = epsilon;
  const auto batch = sample_batch(f, n, n_samples);
  double s = 0.0;
  for (const auto& j : batch) {
    for (std::size_t k = 0; k < n; ++k) s += std::log(j.a[k]);
  }
  r.gamma_n = std::exp(s / static_cast<double>(n * n_samples));

  const auto eq = equilibrium(e);
  r.capacity = eq.capacity();
  const auto q = eq.quadrature(per_interval);
  r.nodes = q.size();
  std::vector<double> g(q.size());
  parallel_for(q.size(), [&](std::size_t i) {
    const cd z(q.nodes[i], epsilon);
    double acc = 0.0;
    for (const auto& j : batch) acc += log_transfer_norm(j, n, z);
    g[i] = acc / static_cast<double>(batch.size());
  });
  double mean = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    mean += q.weights[i] * g[i];
    mass += q.weights[i];
  }
  r.mean_lyapunov = mean / mass;
  r.rhs = r.capacity * std::exp(-r.mean_lyapunov);
  r.residual = std::abs(r.gamma_n - r.rhs);
  return r;
}

RotationOpucReport rotation_opuc_check(const RadialLaw& law, std::size_t n, std::size_t n_samples, std::uint64_t seed,
                                       std::size_t zero_degree) {
  if (!(law.radius >= 0.0 && law.radius < 1.0)) throw Error(ErrorCode::BadLaw, "radial law must live in |z| < 1");
  if (n == 0) throw Error(ErrorCode::BadInput, "rotation OPUC check needs n >= 1");
  require_samples(n_samples);
  const std::size_t nz = std::min({zero_degree, n, std::size_t{128}});
  RotationOpucReport r;

  // int_0^R log(1 - r^2) (2 r / R^2) dr
  double integral = 0.0;
  if (law.radius > 0.0) {
    const auto gl = gauss_legendre(48);
    const double h = 0.5 * law.radius;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double x = h * (gl.nodes[i] + 1.0);
      integral += gl.weights[i] * h * std::log1p(-x * x) * 2.0 * x / (law.radius * law.radius);
    }
  }
  r.target_full = std::exp(integral);
  r.target_half = std::exp(0.5 * integral);

  std::vector<double> prod(n_samples);
  std::vector<std::vector<double>> angles(n_samples);
  parallel_for(n_samples, [&](std::size_t k) {
    std::mt19937_64 rng(seed_for(seed, k));
    std::vector<cd> alpha(n);
    for (auto& a : alpha) {
      const double rad = law.radius * std::sqrt(unit_double(rng));
      a = std::polar(rad, 2.0 * std::numbers::pi * unit_double(rng));
    }
    const auto v = VerblunskyParams::from(std::move(alpha));
    prod[k] = verblunsky_norm_product(v, n);
    if (nz > 0) {
      for (const auto& z : opuc_zeros(v, nz)) angles[k].push_back(std::arg(z));
    }
  });
  const auto ms = mean_and_error(prod);
  r.product_root = ms.mean;
  r.std_error = ms.std_error;

  std::vector<double> all;
  for (const auto& a : angles) all.insert(all.end(), a.begin(), a.end());
  std::sort(all.begin(), all.end());
  r.zeros = all.size();
  if (!all.empty()) {
    const std::vector<double> w(all.size(), 1.0 / static_cast<double>(all.size()));
    r.angle_ks = ks_distance(all, w, [](double t) { return std::clamp((t + std::numbers::pi) / (2.0 * std::numbers::pi), 0.0, 1.0); });
  }
  return r;
}

}  // namespace logpot
