#pragma once

#include <limits>

#include "cbdrs/geom.hpp"

namespace cbdrs {

/// Heading angle in radians from +x, CCW positive, normalised into (-pi, pi].
class Heading {
 public:
  constexpr Heading() = default;
  explicit Heading(double psi);

  double rad() const { return psi_; }
  Vec2 unit() const { return {std::cos(psi_), std::sin(psi_)}; }

 private:
  double psi_ = 0.0;
};

/// Engagement with the dependent agent at the origin and the independent
/// agent at (a, 0). Invariants: a > 0, v_i >= 0, v_d >= v_i, v_d > 0.
class Scenario {
 public:
  Scenario(double a, double v_i, double v_d, double capture_eps = -1.0);

  double a() const { return a_; }
  double v_i() const { return v_i_; }
  double v_d() const { return v_d_; }
  double capture_eps() const { return capture_eps_; }
  double eps_geom() const { return eps_geom_; }
  bool equal_speed() const { return v_d_ == v_i_; }
  /// sqrt(v_d^2 - v_i^2): the slowest horizontal speed of the follower.
  double min_horizontal_speed() const { return min_horizontal_speed_; }

  Vec2 independent_start() const { return {a_, 0.0}; }

 private:
  double a_;
  double v_i_;
  double v_d_;
  double capture_eps_;
  double eps_geom_;
  double min_horizontal_speed_;
};

struct Thresholds {
  double t1 = 0.0;  ///< R_D first touches the vertical diameter of R_I.
  double t2 = 0.0;  ///< P-chord coincides with the vertical diameter.
  double tc = 0.0;  ///< Pure-evasion capture time; +inf at equal speeds.
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

Heading constant_bearing_heading(Heading psi_i, const Scenario& s);
Vec2 dependent_velocity(Heading psi_i, const Scenario& s);
/// Rate at which the along-LOS separation shrinks under the bearing law.
double closing_speed(Heading psi_i, const Scenario& s);
Thresholds thresholds(const Scenario& s);
Circle apollonius_circle(const Scenario& s);

/// Follower x-coordinate when the leader flies heading theta until t_s and
/// then splits the remaining time between +pi/2 and -pi/2.
double proof_control_dependent_x(Heading theta, double t_s, double t, const Scenario& s);
/// Capture time of the same control when the vertical phase lasts until capture.
double proof_control_capture_time(Heading theta, double t_s, const Scenario& s);

}  // namespace cbdrs
