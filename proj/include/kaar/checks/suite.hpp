#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace kaar::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // worst observed residual or count of failures
};

/// Runs every module invariant on randomly generated instances drawn from
/// `seed`. Sizes are kept small enough for the whole suite to finish in a
/// few seconds.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

/// One line per check; returns true if all passed.
bool print_results(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace kaar::checks
