#include "cbdrs/drs.hpp"

#include <algorithm>

namespace cbdrs {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::PreT2: return "pre_t2";
    case Regime::PostT2Hypothesis: return "post_t2_hypothesis";
    case Regime::PostT2Bound: return "post_t2_bound";
    case Regime::EqualSpeed: return "equal_speed";
  }
  return "unknown";
}

double DrsRegion::chord_half_height() const {
  const double r = disk.radius;
  return std::sqrt(std::max(0.0, (r - chord_x) * (r + chord_x)));
}

double p_chord_x(double t, const Scenario& s) { return t * s.min_horizontal_speed(); }

double q_chord_x(double t, const Scenario& s) {
  const double a = s.a();
  return (a * a + (s.v_d() - s.v_i()) * (s.v_d() + s.v_i()) * t * t) / (2.0 * a);
}

DrsRegion region_at(double t, const Scenario& s, bool use_hypothesis) {
  if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("region_at: t must be finite and >= 0");
  const Thresholds th = thresholds(s);
  if (std::isfinite(th.tc) && t > th.tc * (1.0 + 1e-12)) {
    throw DomainError("pursuit concluded: DRS empty");
  }

  DrsRegion r;
  r.t = t;
  r.disk = Circle({0.0, 0.0}, s.v_d() * t);
  if (s.equal_speed()) {
    r.regime = Regime::EqualSpeed;
    r.chord_x = 0.0;
  } else if (t <= th.t2) {
    r.regime = Regime::PreT2;
    r.chord_x = p_chord_x(t, s);
  } else if (use_hypothesis) {
    r.regime = Regime::PostT2Hypothesis;
    r.chord_x = q_chord_x(t, s);
  } else {
    r.regime = Regime::PostT2Bound;
    r.chord_x = p_chord_x(t, s);
  }
  // Rounding near t_c can push the Q-chord a hair past the disk.
  r.chord_x = std::min(r.chord_x, r.disk.radius);
  return r;
}

double violation_depth(const DrsRegion& r, Vec2 p) {
  return std::max({0.0, p.norm() - r.disk.radius, r.chord_x - p.x});
}

bool contains(const DrsRegion& r, Vec2 p, const Scenario& s) {
  const double eps = s.eps_geom();
  return p.norm() <= r.disk.radius + eps && p.x >= r.chord_x - eps;
}

CharacteristicPoints characteristic_points(double t, const Scenario& s) {
  if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("characteristic_points: t must be >= 0");
  CharacteristicPoints cp;
  const double px = p_chord_x(t, s);
  cp.p1 = {px, s.v_i() * t};
  cp.p2 = {px, -s.v_i() * t};
  if (t == 0.0) return cp;

  const Circle rd({0.0, 0.0}, s.v_d() * t);
  const Circle ri(s.independent_start(), s.v_i() * t);
  if (ri.radius == 0.0) return cp;
  const auto pts = circle_circle_intersection(rd, ri, s.eps_geom());
  if (pts.size() == 2) {
    cp.q1 = pts[0];
    cp.q2 = pts[1];
  } else if (pts.size() == 1) {
    cp.q1 = pts[0];
    cp.q2 = pts[0];
  }
  return cp;
}

std::vector<Vec2> boundary_polyline(const DrsRegion& r, int n) {
  if (n < 8) throw std::invalid_argument("boundary_polyline: n must be >= 8");
  if (r.degenerate()) return {Vec2{0.0, 0.0}};

  const double radius = r.disk.radius;
  const double half = r.chord_half_height();
  const double alpha = std::atan2(half, r.chord_x);

  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(n) + 2);
  pts.push_back({r.chord_x, -half});
  for (int k = 1; k <= n; ++k) {
    const double ang = -alpha + 2.0 * alpha * k / (n + 1);
    pts.push_back({radius * std::cos(ang), radius * std::sin(ang)});
  }
  pts.push_back({r.chord_x, half});
  return pts;
}

double region_area(const DrsRegion& r) {
  if (r.degenerate()) return 0.0;
  return circular_segment_area(r.disk, r.chord_x);
}

Vec2 apollonius_tangent_point(const Scenario& s) {
  const Circle apo = apollonius_circle(s);
  const Vec2 origin{0.0, 0.0};
  const double d = distance(origin, apo.center);
  const double r = apo.radius;
  const double tangent_len = std::sqrt(std::max(0.0, (d - r) * (d + r)));
  const Vec2 u = (origin - apo.center) / d;
  const Vec2 perp{-u.y, u.x};
  Vec2 a = apo.center + u * (r * r / d) + perp * (r * tangent_len / d);
  if (a.y < 0.0) a = apo.center + u * (r * r / d) - perp * (r * tangent_len / d);
  return a;
}

double apollonius_collinearity_gap(double t, const Scenario& s) {
  if (!(t > 0.0)) throw std::invalid_argument("collinearity gap: t must be > 0");
  const Vec2 a1 = apollonius_tangent_point(s);
  const Vec2 p1 = characteristic_points(t, s).p1;
  return std::abs(a1.cross(p1)) / (a1.norm() * p1.norm());
}

}  // namespace cbdrs
