#pragma once

#include <functional>
#include <string>
#include <vector>

#include "logpot/io.hpp"

namespace logpot::suite {

struct SuiteOptions {
  // Multiplies every capacity the capacity rows measure; anything but 1
  // should make those rows fail. Used to check the suite's sensitivity.
  double capacity_scale{1.0};
  // Criterion ids to run; empty runs all.
  std::vector<int> only;
};

struct CriterionResult {
  int id{0};
  std::string title;
  bool pass{false};
  std::string measured;
  std::string target;
  double seconds{0.0};
  double time_limit{0.0};
};

// Runs criteria 1..17 in order, calling on_result after each one.
std::vector<CriterionResult> run_acceptance(const SuiteOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS  7  Chebyshev norms and Lobatto points | measured ... | target ... | 1.23 s (limit 60 s)"
std::string format_line(const CriterionResult& r);

// Deterministic values frozen in the golden file.
io::Json regression_values();

struct RegressionOutcome {
  bool identical{false};
  std::vector<std::string> differences;  // "key: golden X, now Y"
};

// Compares the dump of regression_values() byte for byte with the golden file.
RegressionOutcome compare_regression(const std::string& golden_path);
void update_regression(const std::string& golden_path);

}  // namespace logpot::suite
