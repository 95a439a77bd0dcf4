#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cbdrs/geom.hpp"
#include "cbdrs/scenario.hpp"

namespace cbdrs {

enum class Regime { PreT2, PostT2Hypothesis, PostT2Bound, EqualSpeed };

std::string_view to_string(Regime r);

/// Closed DRS region at time t: disk(origin, v_d t) intersected with x >= chord_x.
struct DrsRegion {
  double t = 0.0;
  Regime regime = Regime::PreT2;
  Circle disk;
  double chord_x = 0.0;

  bool degenerate() const { return disk.radius == 0.0; }
  /// Half-height of the chord, sqrt(r^2 - chord_x^2).
  double chord_half_height() const;
};

struct CharacteristicPoints {
  Vec2 p1;
  Vec2 p2;
  std::optional<Vec2> q1;
  std::optional<Vec2> q2;
};

/// x-coordinate of the P-chord, t sqrt(v_d^2 - v_i^2).
double p_chord_x(double t, const Scenario& s);
/// x-coordinate of the Q-chord, (a^2 + (v_d^2 - v_i^2) t^2) / (2a).
double q_chord_x(double t, const Scenario& s);

/// Exact region for t <= t2 (and at equal speeds); past t2 either the
/// conjectured Q-chord region or the proven P-chord superset.
DrsRegion region_at(double t, const Scenario& s, bool use_hypothesis = true);

bool contains(const DrsRegion& r, Vec2 p, const Scenario& s);

/// Distance by which p lies outside r (0 when inside).
double violation_depth(const DrsRegion& r, Vec2 p);

CharacteristicPoints characteristic_points(double t, const Scenario& s);

/// Chord endpoint (chord_x, -y*), n arc samples CCW through (v_d t, 0), then
/// (chord_x, +y*). The closing chord segment is implied.
std::vector<Vec2> boundary_polyline(const DrsRegion& r, int n);

double region_area(const DrsRegion& r);

/// Upper tangent point from the origin to the Apollonius circle.
Vec2 apollonius_tangent_point(const Scenario& s);

/// |A1 x P1| / (|A1| |P1|); zero iff origin, A1 and P1 are collinear.
double apollonius_collinearity_gap(double t, const Scenario& s);

}  // namespace cbdrs
