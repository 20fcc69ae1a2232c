#pragma once

#include <string>
#include <vector>

namespace phg {

/// One named numerical check: pass/fail plus the measured value and the
/// tolerance it was held against (for monotonicity-style checks the value is
/// the worst violation and the tolerance its allowed bound).
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<Check> run_identities_suite();
std::vector<Check> run_sampling_suite();
std::vector<Check> run_gmc_suite();

/// Suite by name: identities | sampling | gmc | all.
std::vector<Check> run_suite(const std::string& name);

bool all_pass(const std::vector<Check>& checks);

}  // namespace phg
