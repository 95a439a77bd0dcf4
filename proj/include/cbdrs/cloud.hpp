#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cbdrs/drs.hpp"
#include "cbdrs/scenario.hpp"

namespace cbdrs {

/// Raised when the deduplicated cloud outgrows SimConfig::max_pairs.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One leader/follower pair. xi.y and xd.y are always bitwise equal.
struct PairState {
  Vec2 xi;
  Vec2 xd;
  bool active = true;

  double separation() const { return xi.x - xd.x; }
};

struct CloudSnapshot {
  double t = 0.0;
  /// Active pairs first (sorted by quantised cell), then the pairs captured
  /// during the step that produced this snapshot (active == false).
  std::vector<PairState> pairs;
  /// Captured child lineages over the whole run, counted before deduplication.
  std::size_t captured_count = 0;

  std::size_t active_count() const;
};

struct SimConfig {
  double dt = 0.2;
  int branching = 18;
  double dedupe_resolution = 0.01;
  std::size_t max_pairs = 5'000'000;
  double horizon = 2.0;
  int threads = 1;
  /// Retain pairs captured in the latest step so they can be inspected.
  bool keep_captured = true;

  /// dt = 0.2, 18 headings, resolution v_i dt / 10, horizon t_c
  /// (3 a / v_d at equal speeds).
  static SimConfig defaults_for(const Scenario& s);
  void validate(const Scenario& s) const;
};

struct QuantKey {
  std::int64_t ix = 0;
  std::int64_t iy = 0;
  std::int64_t id = 0;

  auto operator<=>(const QuantKey&) const = default;
};

QuantKey quantize(const PairState& p, double resolution);

/// Headings -pi + k 2pi / branching for k = 1..branching.
std::vector<Heading> heading_fan(int branching);

CloudSnapshot initial_snapshot(const Scenario& s);

/// Advances a single pair by one constant-heading step. Returns the child
/// and whether the step ends in capture.
std::pair<PairState, bool> advance_pair(const PairState& p, Heading psi, double dt, const Scenario& s);

/// Expands every active pair over the heading fan, prunes captures and
/// keeps the first child per quantised cell. `dt` overrides cfg.dt.
CloudSnapshot step(const CloudSnapshot& snapshot, const SimConfig& cfg, const Scenario& s,
                   std::optional<double> dt = std::nullopt);

/// Calls `visit` on the initial snapshot and every stepped snapshot until the
/// horizon or extinction. The last step is shortened to land on the horizon.
void propagate_each(const Scenario& s, const SimConfig& cfg,
                    const std::function<void(const CloudSnapshot&)>& visit);

std::vector<CloudSnapshot> propagate(const Scenario& s, const SimConfig& cfg);

struct BinBounds {
  double y_low = 0.0;
  double y_high = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
};

/// Per y-bin extent of the active follower cloud; empty bins omitted.
std::vector<BinBounds> empirical_bounds(const CloudSnapshot& snapshot, int bins, const Scenario& s);

struct ContainmentReport {
  double t = 0.0;
  Regime regime = Regime::PreT2;
  std::size_t active = 0;
  std::size_t violations = 0;
  double max_violation_depth = 0.0;
  std::size_t covered_cells = 0;
  std::size_t total_cells = 0;
  double coverage_fraction = 1.0;
};

/// Compares active follower points against region_at(t). Coverage counts
/// grid cells (size cell_size) whose centre lies in the region and that hold
/// at least one follower point.
ContainmentReport containment_report(const CloudSnapshot& snapshot, const Scenario& s,
                                     bool use_hypothesis, double cell_size);

/// Heading as a function of time; sampled at each step midpoint.
using HeadingSchedule = std::function<Heading(double)>;

struct LineageResult {
  std::vector<double> times;
  std::vector<PairState> states;
  std::optional<double> capture_time;
};

/// Replays one leader control through the same step kernel as the cloud.
LineageResult simulate_lineage(const Scenario& s, const HeadingSchedule& schedule, double dt,
                               double horizon);

/// theta until t_s, +pi/2 until (t + t_s)/2, then -pi/2.
HeadingSchedule proof_control_schedule(Heading theta, double t_s, double t);

}  // namespace cbdrs
