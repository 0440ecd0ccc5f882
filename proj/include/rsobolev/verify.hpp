#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rsobolev {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

// Fast property checks across all modules; deterministic for a given seed.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed = 0);

}  // namespace rsobolev
