#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cbdrs/config.hpp"

namespace cbdrs {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  /// Extra measurements printed alongside the table; never gate the result.
  std::vector<std::string> diagnostics;

  bool all_passed() const;
};

/// Evaluates every acceptance criterion for the engagement in cfg. Progress
/// lines go to `progress` when non-null.
AcceptanceReport run_acceptance(const RunConfig& cfg, std::ostream* progress = nullptr);

void print_report(const AcceptanceReport& report, std::ostream& out);

}  // namespace cbdrs
