#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace elseq {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  std::vector<int> only;  // empty means run all criteria
  std::string scratch_dir = "acceptance_scratch";
};

/// Runs the acceptance criteria, printing one pass/fail line each.
/// Returns the number of failures.
int run_acceptance(std::ostream& os, const AcceptanceOptions& options = {});

std::vector<CriterionResult> run_acceptance_detailed(const AcceptanceOptions& options = {});

}  // namespace elseq
