#include <doctest.h>

#include "cbdrs/cloud.hpp"

using namespace cbdrs;

namespace {
const Scenario nominal(1.0, 0.5, 1.0);

SimConfig nominal_sim() { return SimConfig::defaults_for(nominal); }
}  // namespace

TEST_CASE("heading fan") {
  const auto four = heading_fan(4);
  REQUIRE(four.size() == 4);
  CHECK(four[0].rad() == doctest::Approx(-kPi / 2.0));
  CHECK(four[1].rad() == 0.0);
  CHECK(four[2].rad() == doctest::Approx(kPi / 2.0));
  CHECK(four[3].rad() == kPi);

  const auto two = heading_fan(2);
  CHECK(two[0].rad() == 0.0);
  CHECK(two[1].rad() == kPi);

  const auto fan = heading_fan(18);
  CHECK(fan.size() == 18);
  CHECK(fan.back().rad() == kPi);
  for (std::size_t i = 1; i < fan.size(); ++i) CHECK(fan[i].rad() - fan[i - 1].rad() == doctest::Approx(kPi / 9.0));
}

TEST_CASE("defaults follow the scenario") {
  const SimConfig c = nominal_sim();
  CHECK(c.dt == 0.2);
  CHECK(c.branching == 18);
  CHECK(c.dedupe_resolution == doctest::Approx(0.01));
  CHECK(c.horizon == doctest::Approx(2.0));
  CHECK(SimConfig::defaults_for(Scenario(1.0, 1.0, 1.0)).horizon == doctest::Approx(3.0));
}

TEST_CASE("one step with two headings") {
  SimConfig c = nominal_sim();
  c.branching = 2;
  const CloudSnapshot next = step(initial_snapshot(nominal), c, nominal);
  CHECK(next.t == doctest::Approx(0.2));
  REQUIRE(next.active_count() == 2);
  // Sorted by quantised cell: the retreating child has the smaller x_i.
  CHECK(next.pairs[0].xi.x == doctest::Approx(0.9));
  CHECK(next.pairs[0].xd.x == doctest::Approx(0.2));
  CHECK(next.pairs[1].xi.x == doctest::Approx(1.1));
  CHECK(next.pairs[1].xd.x == doctest::Approx(0.2));
}

TEST_CASE("pure-evasion lineage is captured at tc") {
  const LineageResult lin = simulate_lineage(nominal, [](double) { return Heading(0.0); }, 0.2, 5.0);
  REQUIRE(lin.capture_time.has_value());
  CHECK(*lin.capture_time == doctest::Approx(2.0));
  for (std::size_t i = 1; i < lin.states.size(); ++i) {
    CHECK(lin.states[i - 1].separation() - lin.states[i].separation() >= 0.2 * 0.5 - 1e-12);
  }
}

TEST_CASE("extinct snapshot is a fixpoint") {
  CloudSnapshot empty;
  empty.t = 1.0;
  const CloudSnapshot next = step(empty, nominal_sim(), nominal);
  CHECK(next.active_count() == 0);
}

TEST_CASE("short horizon keeps every pair active") {
  SimConfig c = nominal_sim();
  c.horizon = 0.6;
  const auto snaps = propagate(nominal, c);
  REQUIRE(snaps.size() == 4);
  CHECK(snaps.back().t == doctest::Approx(0.6));
  CHECK(snaps.back().captured_count == 0);
  for (const auto& s : snaps) CHECK(s.active_count() == s.pairs.size());
}

TEST_CASE("stationary evader with one heading") {
  const Scenario still(1.0, 0.0, 1.0);
  SimConfig c = SimConfig::defaults_for(still);
  c.branching = 1;
  const auto snaps = propagate(still, c);
  CHECK(snaps.back().t == doctest::Approx(1.0));
  CHECK(snaps.back().active_count() == 0);
  CHECK(snaps.back().captured_count == 1);
}

TEST_CASE("nominal run invariants") {
  const SimConfig c = nominal_sim();
  const double w = nominal.min_horizontal_speed();
  const double t2 = thresholds(nominal).t2;
  std::size_t snapshots = 0;
  double last_t = 0.0;
  std::size_t last_active = 1;
  propagate_each(nominal, c, [&](const CloudSnapshot& snap) {
    ++snapshots;
    last_t = snap.t;
    last_active = snap.active_count();
    for (const PairState& p : snap.pairs) {
      CHECK(p.xi.y == p.xd.y);
      CHECK(std::abs(p.xd.y) <= 0.5 * snap.t + 1e-9);
      if (p.active) {
        CHECK(p.separation() > 0.0);
        CHECK(p.xd.x >= snap.t * w - 1e-9);
      }
    }
    if (snap.active_count() > 0 && snap.t <= t2) {
      const ContainmentReport r = containment_report(snap, nominal, true, c.dedupe_resolution);
      CHECK(r.violations == 0);
    }
  });
  CHECK(snapshots == 11);
  CHECK(last_t == doctest::Approx(2.0));
  CHECK(last_active == 0);
}

TEST_CASE("empirical bounds against the chords") {
  SimConfig c = nominal_sim();
  for (double t : {1.0, 1.4}) {
    c.horizon = t;
    const auto snaps = propagate(nominal, c);
    const auto bins = empirical_bounds(snaps.back(), 20, nominal);
    CHECK_FALSE(bins.empty());
    const double floor_x = t <= 1.0 ? t * nominal.min_horizontal_speed() : q_chord_x(t, nominal);
    for (const BinBounds& b : bins) CHECK(b.x_min >= floor_x - 1e-6);
  }
  CloudSnapshot empty;
  CHECK_THROWS_WITH(empirical_bounds(empty, 4, nominal), "empty cloud");

  const CloudSnapshot one = initial_snapshot(nominal);
  const auto single = empirical_bounds(one, 5, nominal);
  REQUIRE(single.size() == 1);
  CHECK(single[0].x_min == single[0].x_max);
}

TEST_CASE("post-t2 coverage is lower against the proven bound") {
  SimConfig c = nominal_sim();
  c.horizon = 1.4;
  const auto snaps = propagate(nominal, c);
  const ContainmentReport hyp = containment_report(snaps.back(), nominal, true, 0.01);
  const ContainmentReport bound = containment_report(snaps.back(), nominal, false, 0.01);
  CHECK(hyp.violations == 0);
  CHECK(bound.violations == 0);
  CHECK(bound.coverage_fraction < hyp.coverage_fraction);
}

TEST_CASE("budget is enforced") {
  SimConfig c = nominal_sim();
  c.max_pairs = 100;
  CHECK_THROWS_AS(propagate(nominal, c), BudgetError);
}

TEST_CASE("thread count does not change the cloud") {
  SimConfig c = nominal_sim();
  c.horizon = 1.2;
  const auto one = propagate(nominal, c);
  c.threads = 3;
  const auto three = propagate(nominal, c);
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    REQUIRE(one[i].pairs.size() == three[i].pairs.size());
    for (std::size_t j = 0; j < one[i].pairs.size(); ++j) {
      CHECK(one[i].pairs[j].xi == three[i].pairs[j].xi);
      CHECK(one[i].pairs[j].xd == three[i].pairs[j].xd);
    }
  }
}

TEST_CASE("proof control replay") {
  const Heading theta(kPi / 4.0);
  for (double dt : {0.2, 0.1, 0.05}) {
    const LineageResult lin = simulate_lineage(nominal, proof_control_schedule(theta, 0.6, 1.0), dt, 1.0);
    CHECK(lin.states.back().xd.x == doctest::Approx(proof_control_dependent_x(theta, 0.6, 1.0, nominal)).epsilon(1e-12));
    CHECK(lin.states.back().xi.y == lin.states.back().xd.y);
  }
}
