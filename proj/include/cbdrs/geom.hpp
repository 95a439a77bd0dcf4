#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbdrs {

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an input lies outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Throws std::invalid_argument unless both components are finite.
Vec2 checked(Vec2 v);

struct Circle {
  Vec2 center;
  double radius = 0.0;

  Circle() = default;
  Circle(Vec2 c, double r);

  /// Signed residual |p - center| - radius.
  double residual(Vec2 p) const { return distance(p, center) - radius; }
};

/// Points whose focal-distance sum equals string_length. Collapses to the
/// focal segment when string_length equals the focal distance.
class EllipseLocus {
 public:
  EllipseLocus(Vec2 focus_a, Vec2 focus_b, double string_length, double eps = 1e-9);

  Vec2 focus_a() const { return focus_a_; }
  Vec2 focus_b() const { return focus_b_; }
  double string_length() const { return string_length_; }
  double semi_major() const { return string_length_ / 2.0; }
  double semi_minor() const;
  Vec2 center() const { return (focus_a_ + focus_b_) / 2.0; }
  /// Angle of the major axis (focus_a -> focus_b); 0 for coincident foci.
  double orientation() const;
  bool degenerate() const { return degenerate_; }
  double focal_sum(Vec2 p) const { return distance(p, focus_a_) + distance(p, focus_b_); }

 private:
  Vec2 focus_a_;
  Vec2 focus_b_;
  double string_length_;
  bool degenerate_;
};

/// Real intersection points of two circle boundaries, sorted by descending y
/// (ties broken by descending x). Tangency collapses to one point.
std::vector<Vec2> circle_circle_intersection(const Circle& c1, const Circle& c2, double eps = 1e-9);

/// Area of {p in disk : p.x >= chord_x} for a disk centred on the origin.
double circular_segment_area(const Circle& c, double chord_x);

/// Point at centred parametric angle `angle` (major axis along the focal line).
Vec2 ellipse_point(const EllipseLocus& e, double angle);

}  // namespace cbdrs
