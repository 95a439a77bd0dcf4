#include "cbdrs/commands.hpp"

#include <fmt/format.h>

#include <json.hpp>

#include "cbdrs/acceptance.hpp"
#include "cbdrs/drs.hpp"
#include "cbdrs/output.hpp"
#include "cbdrs/switch_optim.hpp"

namespace cbdrs {

namespace {

using nlohmann::json;

json to_json(Vec2 p) { return json{{"x", p.x}, {"y", p.y}}; }

json to_json(const std::optional<Vec2>& p) { return p ? to_json(*p) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json thresholds_json(const Scenario& s) {
  const Thresholds th = thresholds(s);
  return json{{"t1", finite_or_null(th.t1)}, {"t2", finite_or_null(th.t2)}, {"tc", finite_or_null(th.tc)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Common frame for every DRS figure: R_D(t_c), or R_D(horizon) at equal speeds.
Box drs_frame(const Scenario& s, double horizon) {
  const double tc = thresholds(s).tc;
  const double t_end = std::isfinite(tc) ? tc : horizon;
  return Box::around(Circle({0.0, 0.0}, s.v_d() * t_end), 0.05);
}

void draw_region(SvgFigure& fig, const DrsRegion& region, const Scenario& s) {
  fig.circle("circles", region.disk, "#1f4fbf", true);
  fig.circle("circles", Circle(s.independent_start(), s.v_i() * region.t), "#c0392b", true);
  if (region.degenerate()) return;
  const auto boundary = boundary_polyline(region, 128);
  fig.polyline("chord", {boundary.back(), boundary.front()}, "#1e8449");
  fig.polyline("arc", boundary, "#1e8449");
}

std::size_t count_strip(const CloudSnapshot& snap, double lo, double hi) {
  std::size_t n = 0;
  for (const PairState& p : snap.pairs) {
    if (p.active && p.xd.x >= lo && p.xd.x < hi) ++n;
  }
  return n;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const BudgetError*>(&e) != nullptr) return kExitBudget;
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr) return kExitInvalidInput;
  if (dynamic_cast<const std::domain_error*>(&e) != nullptr) return kExitInvalidInput;
  return kExitVerifyFailed;
}

std::vector<Vec2> figure_targets() { return {{0.4, 0.3}, {1.2, -0.9}, {2.0, 1.5}, {3.2, -1.2}}; }

int cmd_region(const RunConfig& cfg, double t, bool svg, std::ostream& log) {
  const Scenario s = cfg.scenario();
  const DrsRegion region = region_at(t, s, true);
  const CharacteristicPoints cp = characteristic_points(t, s);
  const std::string tag = file_tag(t);

  const auto boundary = region.degenerate() ? std::vector<Vec2>{Vec2{0.0, 0.0}} : boundary_polyline(region, 128);
  write_text(cfg.out_dir / ("region_" + tag + ".csv"), polyline_csv(boundary));

  json j;
  j["t"] = t;
  j["regime"] = std::string(to_string(region.regime));
  j["disk_radius"] = region.disk.radius;
  j["chord_x"] = region.chord_x;
  j["chord_endpoints"] = json::array({to_json(Vec2{region.chord_x, region.chord_half_height()}),
                                      to_json(Vec2{region.chord_x, -region.chord_half_height()})});
  j["p_chord_x"] = p_chord_x(t, s);
  j["q_chord_x"] = q_chord_x(t, s);
  j["p1"] = to_json(cp.p1);
  j["p2"] = to_json(cp.p2);
  j["q1"] = to_json(cp.q1);
  j["q2"] = to_json(cp.q2);
  j["area"] = region_area(region);
  j["thresholds"] = thresholds_json(s);
  if (s.equal_speed()) {
    j["apollonius"] = nullptr;
  } else {
    const Circle apo = apollonius_circle(s);
    j["apollonius"] = json{{"center", to_json(apo.center)}, {"radius", apo.radius}};
  }
  write_text(cfg.out_dir / ("points_" + tag + ".json"), dump(j));

  if (svg || cfg.wants("svg")) {
    SvgFigure fig(drs_frame(s, cfg.sim().horizon));
    draw_region(fig, region, s);
    if (!s.equal_speed()) fig.circle("circles", apollonius_circle(s), "#7d3c98");
    std::vector<Vec2> marks{cp.p1, cp.p2};
    if (cp.q1) marks.push_back(*cp.q1);
    if (cp.q2) marks.push_back(*cp.q2);
    fig.points("points", marks, "#000000");
    write_text(cfg.out_dir / ("region_" + tag + ".svg"), fig.str());
  }
  log << fmt::format("region t={} regime={} chord_x={:.6f} area={:.6f}\n", tag, to_string(region.regime),
                     region.chord_x, region_area(region));
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, bool svg, std::ostream& log) {
  const Scenario s = cfg.scenario();
  const SimConfig sim = cfg.sim();
  const bool want_svg = svg || cfg.wants("svg");
  json reports = json::array();

  propagate_each(s, sim, [&](const CloudSnapshot& snap) {
    const std::string tag = file_tag(snap.t);
    write_text(cfg.out_dir / ("cloud_" + tag + ".csv"), cloud_csv(snap));

    const ContainmentReport hyp = containment_report(snap, s, true, sim.dedupe_resolution);
    json r{{"t", snap.t},
           {"regime", std::string(to_string(hyp.regime))},
           {"active", hyp.active},
           {"captured_total", snap.captured_count},
           {"violations", hyp.violations},
           {"max_violation_depth", hyp.max_violation_depth},
           {"coverage_fraction", hyp.coverage_fraction}};
    if (hyp.regime == Regime::PostT2Hypothesis) {
      const ContainmentReport bound = containment_report(snap, s, false, sim.dedupe_resolution);
      r["bound_violations"] = bound.violations;
      r["bound_coverage_fraction"] = bound.coverage_fraction;
      r["strip_points"] = count_strip(snap, p_chord_x(snap.t, s), q_chord_x(snap.t, s) - 1e-6);
    }
    reports.push_back(r);

    if (want_svg) {
      SvgFigure fig(drs_frame(s, sim.horizon));
      draw_region(fig, region_at(snap.t, s, true), s);
      std::vector<Vec2> xi;
      std::vector<Vec2> xd;
      for (const PairState& p : snap.pairs) {
        if (!p.active) continue;
        xi.push_back(p.xi);
        xd.push_back(p.xd);
      }
      fig.points("cloud", xi, "#c0392b");
      fig.points("cloud", xd, "#1f4fbf");
      write_text(cfg.out_dir / ("cloud_" + tag + ".svg"), fig.str());
    }
    log << fmt::format("t={} active={} captured={} violations={}\n", tag, hyp.active, snap.captured_count,
                       hyp.violations);
  });

  json out{{"thresholds", thresholds_json(s)}, {"snapshots", reports}};
  write_text(cfg.out_dir / "containment.json", dump(out));
  return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, std::optional<Vec2> target, bool svg, std::ostream& log) {
  const Scenario s = cfg.scenario();
  const OptimConfig& opt = cfg.optim;
  const std::vector<Vec2> targets = target ? std::vector<Vec2>{*target} : figure_targets();
  const bool want_svg = svg || cfg.wants("svg");

  json extrema = json::array();
  json hypotheses = json::array();
  json oracles = json::array();
  std::optional<SvgFigure> fig;
  if (want_svg) fig.emplace(Box::around(Circle(opt.start, s.v_i() * opt.t), 0.05));
  if (fig) fig->circle("reachable", Circle(opt.start, s.v_i() * opt.t), "#c0392b");

  for (const Vec2 tgt : targets) {
    const EllipseLocus e = switch_ellipse(opt.start, tgt, opt.t, s.v_i());
    const auto samples = ellipse_samples(opt.start, tgt, opt.t, s, opt.n_samples);
    const ExtremaResult ex = extrema_of(samples, e.degenerate());
    const HypothesisReport hyp = hypothesis_extrema_check(opt.start, tgt, opt.t, s, opt.n_samples);
    const std::string tag = file_tag(tgt.x) + "_" + file_tag(tgt.y);
    write_text(cfg.out_dir / ("ellipse_" + tag + ".csv"), ellipse_csv(samples));

    json maxp = json::array();
    json minp = json::array();
    for (Vec2 p : ex.max_points) maxp.push_back(to_json(p));
    for (Vec2 p : ex.min_points) minp.push_back(to_json(p));
    extrema.push_back({{"target", to_json(tgt)},
                       {"degenerate", ex.degenerate},
                       {"samples", ex.samples},
                       {"max_value", ex.max_value},
                       {"max_points", maxp},
                       {"min_value", ex.min_value},
                       {"min_points", minp}});
    hypotheses.push_back({{"target", to_json(tgt)},
                          {"max_at_extreme_x", hyp.max_at_extreme_x},
                          {"min_at_extreme_y", hyp.min_at_extreme_y},
                          {"angular_gap", hyp.angular_gap}});

    const bool interior = distance(opt.start, tgt) < s.v_i() * opt.t;
    if (interior) {
      const OracleEnvelope env =
          multiswitch_oracle(opt.start, tgt, opt.t, s, opt.oracle_legs, opt.oracle_trials, opt.seed, cfg.threads);
      oracles.push_back({{"target", to_json(tgt)},
                         {"legs", opt.oracle_legs},
                         {"trials", env.trials},
                         {"seed", opt.seed},
                         {"min_found", env.min_found},
                         {"max_found", env.max_found},
                         {"grid_min", ex.min_value},
                         {"grid_max", ex.max_value},
                         {"retries", env.retries}});
    } else {
      // A boundary target admits exactly one path; there is nothing to sample.
      oracles.push_back({{"target", to_json(tgt)}, {"legs", opt.oracle_legs}, {"trials", 0},
                         {"min_found", ex.min_value}, {"max_found", ex.max_value},
                         {"grid_min", ex.min_value}, {"grid_max", ex.max_value}});
    }

    if (fig) {
      std::vector<Vec2> ring;
      for (const auto& smp : samples) ring.push_back(smp.point);
      fig->polyline("ellipses", ring, "#2c3e50", true);
      fig->points("maxima", ex.max_points, "#000000");
      fig->points("minima", ex.min_points, "#7f8c8d");
      fig->points("targets", {tgt}, "#1e8449");
    }
    log << fmt::format("target=({}, {}) J in [{:.9f}, {:.9f}] flags max_x={} min_y={}\n", tgt.x, tgt.y,
                       ex.min_value, ex.max_value, hyp.max_at_extreme_x, hyp.min_at_extreme_y);
  }

  const json meta{{"v_i", s.v_i()}, {"v_d", s.v_d()}, {"t", opt.t}, {"start", to_json(opt.start)}};
  write_text(cfg.out_dir / "extrema.json", dump({{"config", meta}, {"targets", extrema}}));
  write_text(cfg.out_dir / "hypothesis.json", dump({{"config", meta}, {"targets", hypotheses}}));
  write_text(cfg.out_dir / "oracle.json", dump({{"config", meta}, {"targets", oracles}}));
  if (fig) write_text(cfg.out_dir / "ellipses.svg", fig->str());
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  const AcceptanceReport report = run_acceptance(cfg, &log);
  print_report(report, log);
  return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace cbdrs
