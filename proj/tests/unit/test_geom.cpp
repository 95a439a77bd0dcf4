#include <doctest.h>

#include <random>

#include "cbdrs/geom.hpp"

using namespace cbdrs;

TEST_CASE("tangent circles meet in one point") {
  const auto pts = circle_circle_intersection(Circle({0, 0}, 1), Circle({2, 0}, 1));
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pts[0].y == doctest::Approx(0.0));
}

TEST_CASE("reachable-set circles at t=1.4") {
  const auto pts = circle_circle_intersection(Circle({0, 0}, 1.4), Circle({1, 0}, 0.7));
  REQUIRE(pts.size() == 2);
  // 2x - 1 = 0.75 * 1.96
  const double x = (1.0 + 0.75 * 1.96) / 2.0;
  CHECK(pts[0].x == doctest::Approx(x).epsilon(1e-12));
  CHECK(pts[0].y == doctest::Approx(std::sqrt(1.96 - x * x)).epsilon(1e-12));
  CHECK(pts[0].y == doctest::Approx(0.659375).epsilon(1e-6));
  CHECK(pts[1].y == doctest::Approx(-pts[0].y));
}

TEST_CASE("disjoint and coincident circles") {
  CHECK(circle_circle_intersection(Circle({0, 0}, 1), Circle({5, 0}, 1)).empty());
  CHECK(circle_circle_intersection(Circle({0, 0}, 1), Circle({0.2, 0}, 3)).empty());
  CHECK_THROWS_WITH_AS(circle_circle_intersection(Circle({1, 1}, 2), Circle({1, 1}, 2)),
                       "degenerate: infinite intersection", DomainError);
}

TEST_CASE("random intersections satisfy both circle equations") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> r(0.1, 3.0);
  int checked_points = 0;
  for (int i = 0; i < 2000; ++i) {
    const Circle c1({u(rng), u(rng)}, r(rng));
    const Circle c2({u(rng), u(rng)}, r(rng));
    for (const Vec2 p : circle_circle_intersection(c1, c2)) {
      CHECK(std::abs(c1.residual(p)) <= 1e-9 * 3.0);
      CHECK(std::abs(c2.residual(p)) <= 1e-9 * 3.0);
      ++checked_points;
    }
  }
  CHECK(checked_points > 500);
}

TEST_CASE("circular segment area") {
  const Circle unit({0, 0}, 1.0);
  CHECK(circular_segment_area(unit, 0.0) == doctest::Approx(kPi / 2.0));
  CHECK(circular_segment_area(unit, 1.0) == doctest::Approx(0.0));
  CHECK(circular_segment_area(unit, -1.0) == doctest::Approx(kPi));
  CHECK_THROWS_WITH_AS(circular_segment_area(unit, 1.5), "chord outside circle", DomainError);

  double prev = circular_segment_area(unit, -1.0);
  for (int k = 1; k <= 200; ++k) {
    const double a = circular_segment_area(unit, -1.0 + k / 100.0);
    CHECK(a < prev);
    prev = a;
  }
}

TEST_CASE("segment area agrees with Monte-Carlo integration") {
  const Circle c({0, 0}, 1.2);
  const double chord = std::sqrt(1.2 * 1.2 - 0.6 * 0.6);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(chord, 1.2);
  std::uniform_real_distribution<double> uy(-0.6, 0.6);
  const int n = 10'000'000;
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    if (x * x + y * y <= 1.44) ++inside;
  }
  const double mc = (1.2 - chord) * 1.2 * inside / n;
  const double exact = circular_segment_area(c, chord);
  CHECK(exact == doctest::Approx(0.130444).epsilon(1e-5));
  CHECK(std::abs(mc - exact) <= 1e-3);
}

TEST_CASE("ellipse parameterisation") {
  const EllipseLocus e({0, 0}, {2, 0}, 4.0);
  const Vec2 p0 = ellipse_point(e, 0.0);
  CHECK(p0.x == doctest::Approx(3.0));
  CHECK(p0.y == doctest::Approx(0.0));
  const Vec2 p1 = ellipse_point(e, kPi / 2.0);
  CHECK(p1.x == doctest::Approx(1.0));
  CHECK(p1.y == doctest::Approx(std::sqrt(3.0)));

  const EllipseLocus circ({0, 0}, {0, 0}, 3.0);
  for (double th : {-2.0, 0.3, 1.7, kPi}) {
    const Vec2 p = ellipse_point(circ, th);
    CHECK(p.x == doctest::Approx(1.5 * std::cos(th)));
    CHECK(p.y == doctest::Approx(1.5 * std::sin(th)));
  }

  const EllipseLocus tilted({-1, 2}, {1.5, -0.5}, 5.0);
  for (int k = 0; k < 720; ++k) {
    const double th = -kPi + k * kPi / 360.0;
    CHECK(std::abs(tilted.focal_sum(ellipse_point(tilted, th)) - 5.0) <= 1e-9);
  }
}

TEST_CASE("ellipse construction rejects empty loci") {
  CHECK_THROWS_AS(EllipseLocus({0, 0}, {3, 0}, 2.0), DomainError);
  const EllipseLocus seg({0, 0}, {3, 0}, 3.0);
  CHECK(seg.degenerate());
  CHECK(seg.semi_minor() == 0.0);
}

TEST_CASE("non-finite vectors are rejected") {
  CHECK_THROWS_AS(checked(Vec2{std::nan(""), 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Circle({0, 0}, -1.0), std::invalid_argument);
}
