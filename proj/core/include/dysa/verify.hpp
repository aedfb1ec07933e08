#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Named verification suites: property checks and desk-scale experiment
// reproductions of the library's rate and complexity claims. The acceptance
// runner and the CLI `verify` verb are both built on run_suite.

namespace dysa {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, for the report
  int criterion = 0;   // acceptance criterion this check feeds (0 = none)
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

// {prox, oracle, schedules, accelerated, strong, complexity}
const std::vector<std::string>& verify_suite_names();

// Runs one suite. jobs caps the replication worker pools of the
// experiment-driven suites (0 = hardware concurrency). Unknown names throw
// std::invalid_argument listing the valid ones.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, int jobs);

}  // namespace dysa
