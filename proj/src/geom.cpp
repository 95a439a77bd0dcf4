#include "cbdrs/geom.hpp"

#include <algorithm>

namespace cbdrs {

Vec2 checked(Vec2 v) {
  if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
    throw std::invalid_argument("non-finite coordinate");
  }
  return v;
}

Circle::Circle(Vec2 c, double r) : center(checked(c)), radius(r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("circle radius must be finite and >= 0");
  }
}

EllipseLocus::EllipseLocus(Vec2 focus_a, Vec2 focus_b, double string_length, double eps)
    : focus_a_(checked(focus_a)), focus_b_(checked(focus_b)), string_length_(string_length) {
  const double d = distance(focus_a_, focus_b_);
  if (!std::isfinite(string_length) || string_length < d - eps) {
    throw DomainError("empty ellipse locus: string length shorter than focal distance");
  }
  // Inputs just inside the tolerance band are snapped onto the segment.
  if (string_length_ < d) string_length_ = d;
  degenerate_ = string_length_ - d <= eps;
}

double EllipseLocus::semi_minor() const {
  const double a = semi_major();
  const double c = distance(focus_a_, focus_b_) / 2.0;
  return std::sqrt(std::max(0.0, (a - c) * (a + c)));
}

double EllipseLocus::orientation() const {
  const Vec2 d = focus_b_ - focus_a_;
  if (d.x == 0.0 && d.y == 0.0) return 0.0;
  return std::atan2(d.y, d.x);
}

std::vector<Vec2> circle_circle_intersection(const Circle& c1, const Circle& c2, double eps) {
  const Vec2 delta = c2.center - c1.center;
  const double d = delta.norm();
  const double r1 = c1.radius;
  const double r2 = c2.radius;

  if (d == 0.0) {
    if (std::abs(r1 - r2) <= eps * std::max(1.0, r1)) {
      throw DomainError("degenerate: infinite intersection");
    }
    return {};
  }

  const double outer = r1 + r2;
  const double inner = std::abs(r1 - r2);
  const double band = 1e-9 * std::max({1.0, d, outer});
  const Vec2 u = delta / d;

  const bool outer_tangent = std::abs(d - outer) <= band;
  const bool inner_tangent = std::abs(d - inner) <= band;
  if (outer_tangent || inner_tangent) {
    // The tangent point lies on the centre line; pick the side matching c1.
    const double sign = (outer_tangent || r1 >= r2) ? 1.0 : -1.0;
    return {c1.center + u * (sign * r1)};
  }
  if (d > outer || d < inner) return {};

  // Distance from c1 along the centre line to the radical line.
  const double along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  const double half_chord = std::sqrt(std::max(0.0, r1 * r1 - along * along));
  const Vec2 base = c1.center + u * along;
  const Vec2 perp{-u.y, u.x};
  std::vector<Vec2> pts{base + perp * half_chord, base - perp * half_chord};
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.y != b.y ? a.y > b.y : a.x > b.x;
  });
  return pts;
}

double circular_segment_area(const Circle& c, double chord_x) {
  const double r = c.radius;
  if (std::abs(chord_x) > r) {
    // Rounding at the tangent chord is tolerated.
    if (std::abs(chord_x) - r > 1e-12 * std::max(1.0, r)) {
      throw DomainError("chord outside circle");
    }
    return chord_x > 0.0 ? 0.0 : kPi * r * r;
  }
  if (r == 0.0) return 0.0;
  const double ratio = std::clamp(chord_x / r, -1.0, 1.0);
  return r * r * std::acos(ratio) - chord_x * std::sqrt(std::max(0.0, r * r - chord_x * chord_x));
}

Vec2 ellipse_point(const EllipseLocus& e, double angle) {
  const double a = e.semi_major();
  const double b = e.semi_minor();
  const double phi = e.orientation();
  const double px = a * std::cos(angle);
  const double py = b * std::sin(angle);
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  return e.center() + Vec2{px * cp - py * sp, px * sp + py * cp};
}

}  // namespace cbdrs
