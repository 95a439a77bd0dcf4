#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cbdrs/geom.hpp"
#include "cbdrs/scenario.hpp"

namespace cbdrs {

struct TrajectoryLeg {
  Heading heading;
  double duration = 0.0;
};

/// Constant-speed, piecewise-constant-heading path.
struct PiecewiseTrajectory {
  Vec2 start;
  std::vector<TrajectoryLeg> legs;
  double speed = 0.0;

  double total_duration() const;
  Vec2 endpoint() const;
};

/// Builds the leg list through `waypoints` (start first, target last).
PiecewiseTrajectory trajectory_through(const std::vector<Vec2>& waypoints, double speed);

EllipseLocus switch_ellipse(Vec2 start, Vec2 target, double t, double v_i);

PiecewiseTrajectory single_switch_trajectory(Vec2 start, Vec2 sw, Vec2 target, double v_i, double t);

/// Horizontal progress of the follower: sum of duration sqrt(v_d^2 - ydot^2).
double functional_value(const PiecewiseTrajectory& traj, double v_d);

struct EllipseSample {
  double angle = 0.0;
  Vec2 point;
  double value = 0.0;
};

/// Functional at n parametric angles -pi + k 2pi/n, k = 1..n.
std::vector<EllipseSample> ellipse_samples(Vec2 start, Vec2 target, double t, const Scenario& s, int n);

struct ExtremaResult {
  double max_value = 0.0;
  std::vector<Vec2> max_points;
  std::vector<int> max_indices;
  double min_value = 0.0;
  std::vector<Vec2> min_points;
  std::vector<int> min_indices;
  int samples = 0;
  bool degenerate = false;
};

inline constexpr double kTieEps = 1e-9;

ExtremaResult extrema_of(const std::vector<EllipseSample>& samples, bool degenerate);
ExtremaResult grid_search_extrema(Vec2 start, Vec2 target, double t, const Scenario& s, int n = 360);

struct HypothesisReport {
  bool max_at_extreme_x = false;
  bool min_at_extreme_y = false;
  double angular_gap = 0.0;
};

/// Checks that every sampled maximiser sits next to the max-x or min-x switch
/// sample and every minimiser next to the max-y or min-y one.
HypothesisReport hypothesis_extrema_check(Vec2 start, Vec2 target, double t, const Scenario& s, int n = 360);

struct OracleEnvelope {
  double min_found = 0.0;
  double max_found = 0.0;
  std::size_t trials = 0;
  std::size_t retries = 0;
};

/// Random admissible path with `legs` legs from start to target in time t.
/// Intermediate waypoints are drawn uniformly from nested reachable
/// ellipses; the last switch lies on the exact closing ellipse.
PiecewiseTrajectory sample_multiswitch_trajectory(Vec2 start, Vec2 target, double t, double v_i, int legs,
                                                  std::mt19937_64& rng);

/// Envelope of the functional over random multi-leg paths. Each trial draws
/// from its own seed, so the result does not depend on `threads`.
OracleEnvelope multiswitch_oracle(Vec2 start, Vec2 target, double t, const Scenario& s, int legs,
                                  std::size_t trials, std::uint64_t seed, int threads = 1);

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

struct FirstIntegralRow {
  double xdot = 0.0;
  /// ydot / sqrt(v_d^2 - ydot^2)
  double ydot_term = 0.0;
};

/// Per-leg quantities entering the Euler-Lagrange first integrals. Diagnostic only.
std::vector<FirstIntegralRow> euler_lagrange_residual(const PiecewiseTrajectory& traj, const Scenario& s);

}  // namespace cbdrs
