#pragma once

// The acceptance battery: ten criteria covering exact transforms, the numeric
// R-transform, Levy pairs, Monte Carlo and lattice bounds.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace freemoments {

struct SuiteConfig {
  /// Criterion numbers ("4") or tags ("series", "numeric", ...); empty runs all.
  std::set<std::string> only;
  /// Negative control: compares the semicircle ray fit against cumulants of
  /// corrupted moments (m_4 = 3 instead of 2), which must fail.
  bool corrupt_semicircle = false;
  std::uint64_t seed = 20261015;
  /// Threads for the Monte Carlo trials.
  unsigned threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string anchor;
  std::vector<std::string> tags;
  bool pass = false;
  double seconds = 0;
  double time_limit = 0;  // 0 means no limit
  std::vector<std::string> checks;  // failed checks, or a one-line summary
};

struct SuiteReport {
  std::vector<CriterionResult> criteria;
  bool pass = true;
};

/// Tags accepted by SuiteConfig::only.
std::vector<std::string> suite_tags();

/// Runs every selected criterion; failures (and exceptions) are recorded per
/// criterion, never short-circuited.
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace freemoments
