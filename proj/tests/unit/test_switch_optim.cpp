#include <doctest.h>

#include <algorithm>

#include "cbdrs/switch_optim.hpp"

using namespace cbdrs;

namespace {
const Scenario nominal(1.0, 0.5, 1.0);
const Vec2 origin{0.0, 0.0};
}  // namespace

TEST_CASE("switch ellipse") {
  const EllipseLocus e = switch_ellipse(origin, {2, 0}, 8.0, 0.5);
  CHECK(e.focus_b() == Vec2{2, 0});
  CHECK(e.string_length() == 4.0);
  CHECK(switch_ellipse(origin, {4, 0}, 8.0, 0.5).degenerate());
  const EllipseLocus c = switch_ellipse({1, 1}, {1, 1}, 8.0, 0.5);
  CHECK(c.semi_minor() == doctest::Approx(2.0));
  CHECK_THROWS_WITH_AS(switch_ellipse(origin, {4.5, 0}, 8.0, 0.5), "target outside R_I(t)", DomainError);
}

TEST_CASE("single switch trajectory") {
  const auto top = single_switch_trajectory(origin, {1, std::sqrt(3.0)}, {2, 0}, 0.5, 8.0);
  REQUIRE(top.legs.size() == 2);
  CHECK(top.legs[0].duration == doctest::Approx(4.0));
  CHECK(top.legs[1].duration == doctest::Approx(4.0));

  const auto vertex = single_switch_trajectory(origin, {3, 0}, {2, 0}, 0.5, 8.0);
  CHECK(vertex.legs[0].duration == doctest::Approx(6.0));
  CHECK(vertex.legs[1].duration == doctest::Approx(2.0));
  CHECK(vertex.endpoint().x == doctest::Approx(2.0));

  const auto straight = single_switch_trajectory(origin, {2, 0}, {4, 0}, 0.5, 8.0);
  CHECK(straight.legs[0].heading.rad() == straight.legs[1].heading.rad());

  CHECK_THROWS_AS(single_switch_trajectory(origin, {1, 1}, {2, 0}, 0.5, 8.0), DomainError);
}

TEST_CASE("functional values") {
  PiecewiseTrajectory h{origin, {{Heading(0.0), 8.0}}, 0.5};
  CHECK(functional_value(h, 1.0) == doctest::Approx(8.0));
  PiecewiseTrajectory v{origin, {{Heading(kPi / 2.0), 8.0}}, 0.5};
  CHECK(functional_value(v, 1.0) == doctest::Approx(8.0 * std::sqrt(0.75)));
  PiecewiseTrajectory updown{origin, {{Heading(kPi / 2.0), 4.0}, {Heading(-kPi / 2.0), 4.0}}, 0.5};
  CHECK(functional_value(updown, 1.0) == doctest::Approx(6.928).epsilon(1e-4));
}

TEST_CASE("grid search on an axis-aligned ellipse") {
  const ExtremaResult r = grid_search_extrema(origin, {2, 0}, 8.0, nominal, 360);
  REQUIRE(r.max_points.size() == 2);
  REQUIRE(r.min_points.size() == 2);
  std::vector<double> max_x{r.max_points[0].x, r.max_points[1].x};
  std::sort(max_x.begin(), max_x.end());
  CHECK(max_x[0] == doctest::Approx(-1.0));
  CHECK(max_x[1] == doctest::Approx(3.0));
  for (const Vec2 p : r.min_points) {
    CHECK(p.x == doctest::Approx(1.0));
    CHECK(std::abs(p.y) == doctest::Approx(std::sqrt(3.0)));
  }
}

TEST_CASE("grid search degenerate and circular loci") {
  const ExtremaResult seg = grid_search_extrema(origin, {4, 0}, 8.0, nominal, 360);
  CHECK(seg.degenerate);
  CHECK(seg.max_value == doctest::Approx(8.0));
  CHECK(seg.min_value == doctest::Approx(seg.max_value));

  const ExtremaResult circ = grid_search_extrema(origin, origin, 8.0, nominal, 360);
  REQUIRE(circ.max_points.size() == 2);
  for (const Vec2 p : circ.max_points) CHECK(std::abs(p.y) <= 1e-12);
  for (const Vec2 p : circ.min_points) CHECK(std::abs(p.x) <= 1e-12);
  CHECK(circ.max_value == doctest::Approx(8.0));
  CHECK(circ.min_value == doctest::Approx(8.0 * std::sqrt(0.75)));
}

TEST_CASE("reflection symmetry") {
  for (const Vec2 tgt : {Vec2{0.4, 0.3}, Vec2{1.2, -0.9}, Vec2{-2.0, 1.5}}) {
    const ExtremaResult a = grid_search_extrema(origin, tgt, 8.0, nominal, 360);
    const ExtremaResult b = grid_search_extrema(origin, {tgt.x, -tgt.y}, 8.0, nominal, 360);
    CHECK(std::abs(a.max_value - b.max_value) <= 1e-12);
    CHECK(std::abs(a.min_value - b.min_value) <= 1e-12);
  }
}

TEST_CASE("ellipse samples keep the time budget") {
  for (const EllipseSample& s : ellipse_samples(origin, {2.5, -1.0}, 8.0, nominal, 360)) {
    const auto traj = single_switch_trajectory(origin, s.point, {2.5, -1.0}, 0.5, 8.0);
    CHECK(std::abs(traj.total_duration() - 8.0) <= 1e-9);
    CHECK(distance(traj.endpoint(), {2.5, -1.0}) <= 1e-9);
  }
}

TEST_CASE("hypothesis check on the figure targets") {
  for (const Vec2 tgt : {Vec2{0.4, 0.3}, Vec2{1.2, -0.9}, Vec2{2.0, 1.5}, Vec2{3.2, -1.2}}) {
    const HypothesisReport h = hypothesis_extrema_check(origin, tgt, 8.0, nominal, 360);
    CHECK(h.max_at_extreme_x);
    CHECK(h.min_at_extreme_y);
    CHECK(h.angular_gap <= 2.0 * kPi / 360.0 + 1e-15);
  }
  const HypothesisReport seg = hypothesis_extrema_check(origin, {4, 0}, 8.0, nominal, 360);
  CHECK(seg.max_at_extreme_x);
  CHECK(seg.min_at_extreme_y);
}

TEST_CASE("multi-switch sampler is admissible") {
  std::mt19937_64 rng(9);
  for (int legs = 2; legs <= 6; ++legs) {
    for (int i = 0; i < 300; ++i) {
      const auto traj = sample_multiswitch_trajectory(origin, {1.0, 0.7}, 8.0, 0.5, legs, rng);
      CHECK(traj.legs.size() == static_cast<std::size_t>(legs));
      CHECK(std::abs(traj.total_duration() - 8.0) <= 1e-9);
      CHECK(distance(traj.endpoint(), {1.0, 0.7}) <= 1e-9);
      const double j = functional_value(traj, 1.0);
      CHECK(j >= 8.0 * std::sqrt(0.75) - 1e-9);
      CHECK(j <= 8.0 + 1e-9);
    }
  }
}

TEST_CASE("oracle envelope") {
  const Vec2 tgt{1.2, -0.9};
  const ExtremaResult grid = grid_search_extrema(origin, tgt, 8.0, nominal, 3600);
  const OracleEnvelope two = multiswitch_oracle(origin, tgt, 8.0, nominal, 2, 2000, 4);
  CHECK(two.max_found <= grid.max_value + 1e-6);
  CHECK(two.min_found >= grid.min_value - 1e-6);
  const OracleEnvelope three = multiswitch_oracle(origin, tgt, 8.0, nominal, 3, 2000, 4);
  CHECK(three.max_found <= grid.max_value + 1e-6);
  CHECK(three.min_found >= grid.min_value - 1e-6);
  CHECK(three.trials == 2000);

  const OracleEnvelope again = multiswitch_oracle(origin, tgt, 8.0, nominal, 3, 2000, 4, 3);
  CHECK(again.min_found == three.min_found);
  CHECK(again.max_found == three.max_found);

  CHECK_THROWS_AS(multiswitch_oracle(origin, {4, 0}, 8.0, nominal, 3, 10, 1), DomainError);
}

TEST_CASE("first-integral rows") {
  PiecewiseTrajectory h{origin, {{Heading(0.0), 8.0}}, 0.5};
  const auto rh = euler_lagrange_residual(h, nominal);
  REQUIRE(rh.size() == 1);
  CHECK(rh[0].xdot == doctest::Approx(0.5));
  CHECK(rh[0].ydot_term == doctest::Approx(0.0));
  PiecewiseTrajectory v{origin, {{Heading(kPi / 2.0), 8.0}}, 0.5};
  const auto rv = euler_lagrange_residual(v, nominal);
  CHECK(rv[0].xdot == doctest::Approx(0.0));
  CHECK(rv[0].ydot_term == doctest::Approx(0.5 / std::sqrt(0.75)));
  PiecewiseTrajectory two{origin, {{Heading(0.3), 4.0}, {Heading(-1.0), 4.0}}, 0.5};
  CHECK(euler_lagrange_residual(two, nominal).size() == 2);
}
