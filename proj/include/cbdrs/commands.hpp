#pragma once

#include <exception>
#include <optional>
#include <ostream>
#include <vector>

#include "cbdrs/config.hpp"

namespace cbdrs {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitInvalidInput = 2, kExitBudget = 3 };

/// Maps an exception escaping a command onto the documented exit codes.
int exit_code_for(const std::exception& e);

/// Targets used when `optimize` runs without --target: increasingly
/// eccentric switch ellipses for the default optimisation horizon.
std::vector<Vec2> figure_targets();

/// region_<t>.csv, points_<t>.json and optionally region_<t>.svg.
int cmd_region(const RunConfig& cfg, double t, bool svg, std::ostream& log);

/// cloud_<t>.csv per snapshot, containment.json, optional cloud_<t>.svg.
int cmd_simulate(const RunConfig& cfg, bool svg, std::ostream& log);

/// Per target: ellipse_<x>_<y>.csv; across targets extrema.json,
/// hypothesis.json and oracle.json.
int cmd_optimize(const RunConfig& cfg, std::optional<Vec2> target, bool svg, std::ostream& log);

/// Runs the acceptance criteria against cfg and prints a pass/fail table.
int cmd_verify(const RunConfig& cfg, std::ostream& log);

}  // namespace cbdrs
