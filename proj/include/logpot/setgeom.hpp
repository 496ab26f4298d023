#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace logpot {

struct Interval {
  double lo{0.0};
  double hi{0.0};

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * (hi - lo); }
  bool operator==(const Interval&) const = default;
};

// A compact subset of the real line given as finitely many disjoint closed
// intervals, sorted left to right. Immutable after construction.
class IntervalUnion {
 public:
  // Sorts, merges overlapping or touching pieces (absolute tolerance
  // kMergeTolerance) and rejects empty input, reversed pairs and pieces that
  // end up with zero length.
  static IntervalUnion normalize(std::span<const std::pair<double, double>> raw);
  static IntervalUnion normalize(std::initializer_list<std::pair<double, double>> raw);

  static constexpr double kMergeTolerance = 1e-12;

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  std::size_t gap_count() const { return intervals_.size() - 1; }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }

  // Gap j lies between interval j and interval j+1.
  Interval gap(std::size_t j) const { return {intervals_[j].hi, intervals_[j + 1].lo}; }
  Interval hull() const { return {intervals_.front().lo, intervals_.back().hi}; }

  bool contains(double x, double tol = 0.0) const;
  // Index of the interval containing x (with tolerance), or size() if none.
  std::size_t locate(double x, double tol = 0.0) const;
  bool is_subset_of(const IntervalUnion& other, double tol = kMergeTolerance) const;
  std::size_t longest_interval() const;

  // Lebesgue measure.
  double lebesgue() const;

  // Image under x -> scale * x + shift; scale must be positive.
  IntervalUnion scale_translate(double scale, double shift) const;

  bool operator==(const IntervalUnion&) const = default;

 private:
  explicit IntervalUnion(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {}

  std::vector<Interval> intervals_;
};

// Level-n prefractal of the symmetric Cantor construction on [0,1]: 2^n
// intervals of length ratio^n. ratio = 1/3 gives the middle-thirds set.
IntervalUnion cantor_approximant(int level, double ratio);

}  // namespace logpot
