#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace l2tor {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::string detail;
};

/// Runs the full acceptance battery (quick mode shrinks the randomized
/// counts and grids). One pass/fail line per criterion is written to `log`
/// when given.
std::vector<CriterionResult> run_selftest(bool quick, std::ostream* log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace l2tor
