#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace dforms {

// One verification block: a named family of exact cross-checks.
struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;  // first failure, empty when the block passes
};

// Runs the full cross-verification suite: dimension grid, universal family,
// algebraic independence, invariant weights, level dimensions, Hecke
// composition, module round-trips, strata specialization and the trace/index
// identity.  The seed drives the randomized module round-trip block; every
// other block is deterministic.  All comparisons are exact.
std::vector<CheckResult> verification_suite(uint64_t seed);

}  // namespace dforms
