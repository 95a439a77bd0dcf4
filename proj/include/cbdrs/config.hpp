#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cbdrs/cloud.hpp"
#include "cbdrs/scenario.hpp"

namespace cbdrs {

struct OptimConfig {
  int n_samples = 360;
  int oracle_legs = 3;
  std::size_t oracle_trials = 10'000;
  std::uint64_t seed = 1;
  double t = 8.0;
  Vec2 start{0.0, 0.0};
};

/// Everything one CLI invocation needs. Values left unset in the file fall
/// back to the defaults derived from the scenario.
struct RunConfig {
  double a = 1.0;
  double v_i = 0.5;
  double v_d = 1.0;
  std::optional<double> capture_eps;

  std::optional<double> dt;
  int branching = 18;
  std::optional<double> dedupe_resolution;
  std::size_t max_pairs = 5'000'000;
  std::optional<double> horizon;
  int threads = 1;

  OptimConfig optim;

  std::filesystem::path out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};

  Scenario scenario() const;
  SimConfig sim() const;
  bool wants(const std::string& format) const;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys and
/// malformed values raise std::invalid_argument naming the line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// The shipped default document, identical to configs/default.cfg.
std::string default_config_text();

}  // namespace cbdrs
