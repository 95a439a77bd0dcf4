#include <doctest.h>

#include "cbdrs/scenario.hpp"

using namespace cbdrs;

namespace {
const Scenario nominal(1.0, 0.5, 1.0);
}

TEST_CASE("heading normalisation") {
  CHECK(Heading(kPi).rad() == kPi);
  CHECK(Heading(-kPi).rad() == doctest::Approx(kPi));
  CHECK(Heading(3.0 * kPi / 2.0).rad() == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("scenario invariants") {
  CHECK_THROWS_AS(Scenario(0.0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Scenario(1.0, 1.5, 1.0), std::invalid_argument);
  CHECK(nominal.capture_eps() == doctest::Approx(1e-6));
  CHECK(Scenario(1.0, 1.0, 1.0).equal_speed());
}

TEST_CASE("constant bearing heading") {
  CHECK(constant_bearing_heading(Heading(0.0), nominal).rad() == 0.0);
  CHECK(constant_bearing_heading(Heading(kPi / 2.0), nominal).rad() == doctest::Approx(kPi / 6.0));
  CHECK(constant_bearing_heading(Heading(kPi), nominal).rad() == doctest::Approx(0.0));
  const Scenario eq(1.0, 1.0, 1.0);
  CHECK(constant_bearing_heading(Heading(kPi / 2.0), eq).rad() == doctest::Approx(kPi / 2.0));
}

TEST_CASE("dependent velocity and closing speed") {
  const Vec2 v0 = dependent_velocity(Heading(0.0), nominal);
  CHECK(v0.x == doctest::Approx(1.0));
  CHECK(v0.y == doctest::Approx(0.0));
  const Vec2 up = dependent_velocity(Heading(kPi / 2.0), nominal);
  CHECK(up.x == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(up.y == doctest::Approx(0.5));
  const Vec2 down = dependent_velocity(Heading(-kPi / 2.0), nominal);
  CHECK(down.x == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(down.y == doctest::Approx(-0.5));

  CHECK(closing_speed(Heading(0.0), nominal) == doctest::Approx(0.5));
  CHECK(closing_speed(Heading(kPi), nominal) == doctest::Approx(1.5));
  CHECK(closing_speed(Heading(kPi / 2.0), nominal) == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("heading sweep properties") {
  const double w = nominal.min_horizontal_speed();
  double min_close = kInfinity;
  double argmin = 1.0;
  for (int k = 0; k <= 20000; ++k) {
    const Heading psi(-kPi + k * 2.0 * kPi / 20000.0);
    const Heading psd = constant_bearing_heading(psi, nominal);
    CHECK(std::abs(nominal.v_d() * std::sin(psd.rad()) - nominal.v_i() * std::sin(psi.rad())) <= 1e-12);
    CHECK(std::abs(psd.rad()) <= kPi / 2.0);
    CHECK(dependent_velocity(psi, nominal).x >= w - 1e-15);
    const double c = closing_speed(psi, nominal);
    CHECK(c >= 0.5 - 1e-15);
    CHECK(c <= 1.5 + 1e-15);
    if (c < min_close) {
      min_close = c;
      argmin = psi.rad();
    }
  }
  CHECK(argmin == doctest::Approx(0.0));
  CHECK(min_close == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(dependent_velocity(Heading(kPi / 2.0), nominal).x == doctest::Approx(w).epsilon(1e-15));
}

TEST_CASE("thresholds") {
  const Thresholds th = thresholds(nominal);
  CHECK(th.t1 == doctest::Approx(1.0));
  CHECK(std::abs(th.t2 - 1.1547005383792517) <= 1e-12);
  CHECK(th.tc == doctest::Approx(2.0));

  const Thresholds scaled = thresholds(Scenario(2.0, 0.5, 1.0));
  CHECK(scaled.t1 == doctest::Approx(2.0));
  CHECK(scaled.t2 == doctest::Approx(2.3094).epsilon(1e-4));
  CHECK(scaled.tc == doctest::Approx(4.0));

  const Thresholds slow = thresholds(Scenario(1.0, 1e-9, 1.0));
  CHECK(slow.t1 == doctest::Approx(1.0));
  CHECK(slow.t2 == doctest::Approx(1.0));
  CHECK(slow.tc == doctest::Approx(1.0));

  const Thresholds eq = thresholds(Scenario(1.0, 1.0, 1.0));
  CHECK(eq.tc == kInfinity);
  CHECK(eq.t2 == kInfinity);
}

TEST_CASE("apollonius circle") {
  const Circle c = apollonius_circle(nominal);
  CHECK(c.center.x == doctest::Approx(4.0 / 3.0));
  CHECK(c.radius == doctest::Approx(2.0 / 3.0));
  const Circle d = apollonius_circle(Scenario(3.0, 1.0, 2.0));
  CHECK(d.center.x == doctest::Approx(4.0));
  CHECK(d.radius == doctest::Approx(2.0));
  const Circle e = apollonius_circle(Scenario(1.0, 1e-9, 1.0));
  CHECK(e.center.x == doctest::Approx(1.0));
  CHECK(e.radius == doctest::Approx(0.0));
  CHECK_THROWS_AS(apollonius_circle(Scenario(1.0, 1.0, 1.0)), DomainError);
}

TEST_CASE("proof control closed forms") {
  CHECK(proof_control_dependent_x(Heading(0.0), 1.3, 1.3, nominal) == doctest::Approx(1.3));
  CHECK(proof_control_dependent_x(Heading(0.7), 0.0, 1.3, nominal) == doctest::Approx(1.3 * std::sqrt(0.75)));
  CHECK(proof_control_dependent_x(Heading(kPi / 2.0), 0.5, 1.0, nominal) == doctest::Approx(std::sqrt(0.75)));
  CHECK_THROWS(proof_control_dependent_x(Heading(0.0), 1.5, 1.0, nominal));

  const double t2 = thresholds(nominal).t2;
  CHECK(proof_control_capture_time(Heading(1.1), 0.0, nominal) == doctest::Approx(t2));
  CHECK(proof_control_capture_time(Heading(kPi / 2.0), 0.8, nominal) == doctest::Approx(t2));
  CHECK(proof_control_capture_time(Heading(0.0), 1.0, nominal) == doctest::Approx(1.5773).epsilon(1e-4));

  for (int i = 0; i <= 60; ++i) {
    const Heading th(-kPi / 2.0 + i * kPi / 60.0);
    for (double ts : {0.0, 0.2, 0.5, 1.0, 2.0}) {
      CHECK(proof_control_capture_time(th, ts, nominal) >= t2 - 1e-12);
    }
  }
}
