#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dgdmax/config.hpp"

namespace dgdmax {

/// Synthetic N = 200, n = 20 DRLR split over 5 agents on a ring, beta_y = 0.1.
RunConfig desk_fixture_config(std::uint64_t seed = 1);

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Property suites behind `check --suite`: "invariants" or "paper-properties".
std::vector<CheckOutcome> run_check_suite(const std::string& suite, std::uint64_t seed = 1);

void print_outcomes(std::ostream& out, const std::vector<CheckOutcome>& outcomes);

}  // namespace dgdmax
