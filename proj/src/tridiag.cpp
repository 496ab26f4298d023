#include "logpot/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "logpot/error.hpp"

namespace logpot {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct SturmResult {
  std::size_t count;
  double log_derivative;  // d/dx log|det(T - x)|
};

class SturmEvaluator {
 public:
  SturmEvaluator(std::span<const double> diag, std::span<const double> off_sq)
      : diag_(diag), off_sq_(off_sq) {
    double scale = 0.0;
    for (double d : diag) scale = std::max(scale, std::abs(d));
    for (double e : off_sq) scale = std::max(scale, std::sqrt(e));
    pivmin_ = std::max(std::numeric_limits<double>::min(), kEps * kEps * std::max(scale * scale, 1e-300));
  }

  std::size_t count(double x) const {
    std::size_t c = 0;
    double q = diag_[0] - x;
    if (std::abs(q) < pivmin_) q = -pivmin_;
    if (q < 0) ++c;
    for (std::size_t i = 1; i < diag_.size(); ++i) {
      q = diag_[i] - x - off_sq_[i - 1] / q;
      if (std::abs(q) < pivmin_) q = -pivmin_;
      if (q < 0) ++c;
    }
    return c;
  }

  SturmResult evaluate(double x) const {
    std::size_t c = 0;
    double q = diag_[0] - x;
    if (std::abs(q) < pivmin_) q = -pivmin_;
    double dq = -1.0;
    double sum = dq / q;
    if (q < 0) ++c;
    for (std::size_t i = 1; i < diag_.size(); ++i) {
      const double ratio = off_sq_[i - 1] / q;
      const double dq_next = -1.0 + ratio * dq / q;
      q = diag_[i] - x - ratio;
      if (std::abs(q) < pivmin_) q = -pivmin_;
      dq = dq_next;
      sum += dq / q;
      if (q < 0) ++c;
    }
    return {c, sum};
  }

 private:
  std::span<const double> diag_;
  std::span<const double> off_sq_;
  double pivmin_;
};

// Refines eigenvalue `index` inside [lo, hi] where count(lo) <= index < count(hi).
double refine(const SturmEvaluator& sturm, std::size_t index, double lo, double hi, double tol) {
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const SturmResult r = sturm.evaluate(x);
    if (r.count <= index) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= tol) break;
    double next = 0.5 * (lo + hi);
    if (std::isfinite(r.log_derivative) && r.log_derivative != 0.0) {
      const double newton = x - 1.0 / r.log_derivative;
      if (newton > lo && newton < hi) {
        if (std::abs(newton - x) <= tol) {
          // Converged: confirm the bracket around the Newton point.
          const double a = std::max(lo, newton - tol);
          const double b = std::min(hi, newton + tol);
          if (sturm.count(a) <= index && sturm.count(b) > index) return newton;
        }
        next = newton;
      }
    }
    x = next;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off_sq, double x) {
  if (diag.empty()) return 0;
  return SturmEvaluator(diag, off_sq).count(x);
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  std::vector<double> off_sq(off.size());
  for (std::size_t i = 0; i < off.size(); ++i) off_sq[i] = off[i] * off[i];

  // Gershgorin enclosure.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double norm = std::max(std::abs(lo), std::abs(hi));
  const double tol = 4.0 * kEps * std::max(norm, std::numeric_limits<double>::min());
  lo -= tol + 2.0 * kEps * norm;
  hi += tol + 2.0 * kEps * norm;

  SturmEvaluator sturm(diag, off_sq);

  struct Pending {
    double lo, hi;
    std::size_t count_lo, count_hi;
  };
  std::vector<Pending> stack{{lo, hi, 0, n}};
  while (!stack.empty()) {
    Pending p = stack.back();
    stack.pop_back();
    const std::size_t k = p.count_hi - p.count_lo;
    if (k == 0) continue;
    if (k == 1) {
      out[p.count_lo] = refine(sturm, p.count_lo, p.lo, p.hi, tol);
      continue;
    }
    if (p.hi - p.lo <= tol) {
      for (std::size_t i = p.count_lo; i < p.count_hi; ++i) out[i] = 0.5 * (p.lo + p.hi);
      continue;
    }
    const double mid = 0.5 * (p.lo + p.hi);
    const std::size_t c = std::clamp(sturm.count(mid), p.count_lo, p.count_hi);
    stack.push_back({mid, p.hi, c, p.count_hi});
    stack.push_back({p.lo, mid, p.count_lo, c});
  }
  return out;
}

std::vector<double> tridiagonal_eigenvalues_qr(std::span<const double> diag, std::span<const double> off) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  if (n == 0) return {};
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
  Eigen::VectorXd e(n > 1 ? n - 1 : 0);
  for (Eigen::Index i = 0; i + 1 < n; ++i) e[i] = off[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::SolveFailed, "tridiagonal QR did not converge");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace logpot
