#pragma once

#include <string>
#include <vector>

#include "ruin/config.hpp"
#include "ruin/tail.hpp"

namespace ruin {

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_passed() const;
  // Byte-stable rendering: one "pass|fail name detail" line per check.
  std::string to_text() const;
};

// Full verification battery for a PowerTail config: subset recursion vs the
// path-sum oracle, Monte Carlo moment of M vs the analytic Upsilon, the
// distributional fixed point of Y_inf, and the log-log slope against gamma.
VerifyReport run_verify(const RunConfig& cfg);

}  // namespace ruin
