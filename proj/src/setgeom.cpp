#include "logpot/setgeom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logpot/error.hpp"

namespace logpot {

IntervalUnion IntervalUnion::normalize(std::span<const std::pair<double, double>> raw) {
  if (raw.empty()) throw Error(ErrorCode::EmptySet, "interval list is empty");
  std::vector<Interval> pieces;
  pieces.reserve(raw.size());
  for (const auto& [a, b] : raw) {
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
      throw Error(ErrorCode::MalformedInterval,
                  "malformed interval [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    pieces.push_back({a, b});
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi); });

  std::vector<Interval> merged;
  merged.push_back(pieces.front());
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    Interval& last = merged.back();
    if (pieces[i].lo <= last.hi + kMergeTolerance) {
      last.hi = std::max(last.hi, pieces[i].hi);
    } else {
      merged.push_back(pieces[i]);
    }
  }
  for (const auto& iv : merged) {
    if (!(iv.hi - iv.lo > 0.0)) {
      throw Error(ErrorCode::MalformedInterval,
                  "degenerate interval at " + std::to_string(iv.lo) + " (isolated points have zero capacity)");
    }
  }
  return IntervalUnion(std::move(merged));
}

IntervalUnion IntervalUnion::normalize(std::initializer_list<std::pair<double, double>> raw) {
  return normalize(std::span<const std::pair<double, double>>(raw.begin(), raw.size()));
}

bool IntervalUnion::contains(double x, double tol) const { return locate(x, tol) < size(); }

std::size_t IntervalUnion::locate(double x, double tol) const {
  // First interval whose right end is not left of x.
  auto it = std::lower_bound(intervals_.begin(), intervals_.end(), x - tol,
                             [](const Interval& iv, double v) { return iv.hi < v; });
  if (it != intervals_.end() && it->lo - tol <= x) return static_cast<std::size_t>(it - intervals_.begin());
  return size();
}

bool IntervalUnion::is_subset_of(const IntervalUnion& other, double tol) const {
  for (const auto& iv : intervals_) {
    const std::size_t k = other.locate(iv.lo, tol);
    if (k == other.size() || other[k].hi + tol < iv.hi) return false;
  }
  return true;
}

std::size_t IntervalUnion::longest_interval() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    if (intervals_[i].length() > intervals_[best].length()) best = i;
  }
  return best;
}

double IntervalUnion::lebesgue() const {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

IntervalUnion IntervalUnion::scale_translate(double scale, double shift) const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::BadScale, "scale factor must be positive");
  }
  std::vector<Interval> out;
  out.reserve(intervals_.size());
  for (const auto& iv : intervals_) out.push_back({scale * iv.lo + shift, scale * iv.hi + shift});
  return IntervalUnion(std::move(out));
}

IntervalUnion cantor_approximant(int level, double ratio) {
  if (!(ratio > 0.0 && ratio < 0.5)) throw Error(ErrorCode::BadRatio, "Cantor ratio must lie in (0, 1/2)");
  if (level < 0 || level > 20) throw Error(ErrorCode::BadInput, "Cantor level must be in [0, 20]");
  std::vector<std::pair<double, double>> current{{0.0, 1.0}};
  for (int n = 0; n < level; ++n) {
    std::vector<std::pair<double, double>> next;
    next.reserve(2 * current.size());
    for (const auto& [a, b] : current) {
      const double len = ratio * (b - a);
      next.emplace_back(a, a + len);
      next.emplace_back(b - len, b);
    }
    current = std::move(next);
  }
  return IntervalUnion::normalize(current);
}

}  // namespace logpot
