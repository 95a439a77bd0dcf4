#include "cbdrs/acceptance.hpp"

#include <fmt/format.h>

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "cbdrs/cloud.hpp"
#include "cbdrs/commands.hpp"
#include "cbdrs/drs.hpp"
#include "cbdrs/output.hpp"
#include "cbdrs/switch_optim.hpp"

namespace cbdrs {

namespace {

// Pinned tolerances.
constexpr double kContainDepth = 1e-9;
constexpr double kCoverageMin = 0.98;
constexpr double kCoverageCell = 0.01;
constexpr int kCoverageBranching = 36;
constexpr double kQChordSlack = 1e-6;
constexpr double kFloorSlack = 1e-9;
constexpr double kFloorAttain = 1e-3;
constexpr double kProofControlX = 1e-9;
constexpr double kCollinearGap = 1e-10;
constexpr double kElevation = 1e-12;
constexpr double kEqualSpeedFloor = 1e-9;
constexpr int kHypothesisSamples = 360;
constexpr double kOracleSlack = 1e-6;
constexpr int kOracleGridSamples = 3600;
constexpr std::size_t kOracleTrials = 10'000;
constexpr std::size_t kFunctionalTrials = 100'000;
constexpr int kAreaSamples = 2000;
constexpr std::uint64_t kSeed = 20240917;

/// Everything measured on one propagate() run with the configured settings.
struct RunStats {
  std::vector<ContainmentReport> pre_t2;
  double max_pre_t2_depth = 0.0;
  std::size_t pre_t2_violations = 0;
  std::vector<double> pre_t2_times;
  std::size_t post_window_snapshots = 0;
  std::size_t below_q_chord = 0;
  std::size_t in_strip = 0;
  std::vector<double> post_times;
  double final_t = 0.0;
  std::size_t final_active = 0;
  double max_los_gap = 0.0;
  double min_floor_margin = kInfinity;
};

void scan_pairs(const CloudSnapshot& snap, const Scenario& s, RunStats& st) {
  const double floor_x = p_chord_x(snap.t, s);
  for (const PairState& p : snap.pairs) {
    st.max_los_gap = std::max(st.max_los_gap, std::abs(p.xd.y - p.xi.y));
    st.min_floor_margin = std::min(st.min_floor_margin, p.xd.x - floor_x);
  }
}

RunStats baseline_run(const Scenario& s, const SimConfig& cfg) {
  RunStats st;
  const Thresholds th = thresholds(s);
  auto record_pre = [&](const CloudSnapshot& snap) {
    const ContainmentReport r = containment_report(snap, s, true, cfg.dedupe_resolution);
    st.max_pre_t2_depth = std::max(st.max_pre_t2_depth, r.max_violation_depth);
    st.pre_t2_violations += r.violations;
    st.pre_t2_times.push_back(snap.t);
    st.pre_t2.push_back(r);
  };
  propagate_each(s, cfg, [&](const CloudSnapshot& snap) {
    scan_pairs(snap, s, st);
    st.final_t = snap.t;
    st.final_active = snap.active_count();
    if (snap.t <= th.t2) {
      record_pre(snap);
      // Land one extra step exactly on t2 when the grid skips it.
      const double gap = th.t2 - snap.t;
      if (gap > 1e-12 && gap < cfg.dt * (1.0 - 1e-9) && snap.active_count() > 0) {
        CloudSnapshot at_t2 = step(snap, cfg, s, gap);
        at_t2.t = th.t2;
        scan_pairs(at_t2, s, st);
        record_pre(at_t2);
      }
    } else if (snap.t < th.tc) {
      ++st.post_window_snapshots;
      st.post_times.push_back(snap.t);
      const double q = q_chord_x(snap.t, s) - kQChordSlack;
      const double pc = p_chord_x(snap.t, s);
      for (const PairState& p : snap.pairs) {
        if (!p.active) continue;
        if (p.xd.x < q) ++st.below_q_chord;
        if (p.xd.x >= pc && p.xd.x < q) ++st.in_strip;
      }
    }
  });
  return st;
}

struct CoverageStats {
  double t = 0.0;
  ContainmentReport report;
  double worst_attain_gap = 0.0;
  std::size_t attain_snapshots = 0;
};

CoverageStats coverage_run(const Scenario& s, SimConfig cfg, double t_eval) {
  cfg.branching = std::max(cfg.branching, kCoverageBranching);
  cfg.dedupe_resolution = s.v_i() * cfg.dt / 10.0;
  cfg.horizon = t_eval;
  const double t2 = thresholds(s).t2;
  CoverageStats out;
  out.t = t_eval;
  propagate_each(s, cfg, [&](const CloudSnapshot& snap) {
    if (snap.t > 0.0 && snap.t < t2 && snap.active_count() > 0) {
      double best = kInfinity;
      for (const PairState& p : snap.pairs) {
        if (p.active) best = std::min(best, p.xd.x - p_chord_x(snap.t, s));
      }
      out.worst_attain_gap = std::max(out.worst_attain_gap, best);
      ++out.attain_snapshots;
    }
    if (std::abs(snap.t - t_eval) <= 1e-12 * std::max(1.0, t_eval)) {
      out.report = containment_report(snap, s, true, kCoverageCell);
    }
  });
  return out;
}

std::string join_times(const std::vector<double>& ts) {
  std::string out;
  for (double t : ts) out += (out.empty() ? "" : ",") + fmt::format("{:.4g}", t);
  return out;
}

Vec2 random_target_inside(std::mt19937_64& rng, Vec2 start, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * 0.999 * std::sqrt(u(rng));
  const double ang = -kPi + 2.0 * kPi * u(rng);
  return start + Vec2{r * std::cos(ang), r * std::sin(ang)};
}

std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path().filename());
  }
  std::sort(files.begin(), files.end());
  return files;
}

bool same_tree(const std::filesystem::path& a, const std::filesystem::path& b, std::string& why) {
  const auto fa = sorted_files(a);
  const auto fb = sorted_files(b);
  if (fa != fb) {
    why = "file sets differ";
    return false;
  }
  for (const auto& f : fa) {
    if (read_text(a / f) != read_text(b / f)) {
      why = "contents differ: " + f.string();
      return false;
    }
  }
  why = fmt::format("{} files identical", fa.size());
  return true;
}

}  // namespace

bool AcceptanceReport::all_passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

AcceptanceReport run_acceptance(const RunConfig& cfg, std::ostream* progress) {
  AcceptanceReport report;
  const Scenario s = cfg.scenario();
  const SimConfig sim = cfg.sim();
  const Thresholds th = thresholds(s);
  const double w = s.min_horizontal_speed();

  auto run = [&](int id, const std::string& name, const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    r.id = id;
    r.name = name;
    try {
      r.passed = body(r.detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress) *progress << fmt::format("  [{:2}] {} ... {}\n", id, name, r.passed ? "ok" : "FAILED") << std::flush;
    report.criteria.push_back(std::move(r));
  };

  run(1, "thresholds", [&](std::string& d) {
    const Thresholds p = thresholds(Scenario(1.0, 0.5, 1.0));
    d = fmt::format("t1={:.12g} t2={:.12g} tc={:.12g}", p.t1, p.t2, p.tc);
    return std::abs(p.t1 - 1.0) <= 1e-12 && std::abs(p.t2 - 1.1547) <= 1e-4 &&
           std::abs(p.t2 - 2.0 / std::sqrt(3.0)) <= 1e-9 && std::abs(p.tc - 2.0) <= 1e-12;
  });

  if (s.equal_speed()) throw std::invalid_argument("verify: the acceptance scenario needs v_d > v_i");
  const RunStats base = baseline_run(s, sim);

  run(2, "containment up to t2", [&](std::string& d) {
    d = fmt::format("times {} violations={} max_depth={:.3g}", join_times(base.pre_t2_times), base.pre_t2_violations,
                    base.max_pre_t2_depth);
    const bool reached_t2 = !base.pre_t2_times.empty() && std::abs(base.pre_t2_times.back() - th.t2) <= 1e-12;
    return reached_t2 && base.pre_t2_violations == 0 && base.max_pre_t2_depth <= kContainDepth;
  });

  const CoverageStats cov = coverage_run(s, sim, th.t1);
  run(3, "coverage at t1", [&](std::string& d) {
    d = fmt::format("t={:.4g} dt={:.4g} branching={} coverage={:.4f} ({}/{} cells of {}) need >= {}", cov.t, sim.dt,
                    std::max(sim.branching, kCoverageBranching), cov.report.coverage_fraction, cov.report.covered_cells,
                    cov.report.total_cells, kCoverageCell, kCoverageMin);
    return cov.report.total_cells > 0 && cov.report.coverage_fraction >= kCoverageMin;
  });
  {
    SimConfig fine = sim;
    fine.dt = sim.dt / 2.0;
    const CoverageStats c = coverage_run(s, fine, th.t1);
    report.diagnostics.push_back(fmt::format("coverage at t={:.4g} with dt={:.4g}: {:.4f} ({}/{} cells)", c.t, fine.dt,
                                             c.report.coverage_fraction, c.report.covered_cells,
                                             c.report.total_cells));
  }

  run(4, "Q-chord bound after t2", [&](std::string& d) {
    d = fmt::format("times {} below_q_chord={} strip_points={}", join_times(base.post_times), base.below_q_chord,
                    base.in_strip);
    return base.post_window_snapshots > 0 && base.below_q_chord == 0 && base.in_strip == 0;
  });

  run(5, "termination at tc", [&](std::string& d) {
    d = fmt::format("final t={:.12g} active={}", base.final_t, base.final_active);
    return std::abs(base.final_t - th.tc) <= 1e-9 * th.tc && base.final_active == 0;
  });

  run(6, "LOS identity", [&](std::string& d) {
    d = fmt::format("max |y_d - y_i| = {}", base.max_los_gap);
    return base.max_los_gap == 0.0;
  });

  run(7, "horizontal floor", [&](std::string& d) {
    double lineage_gap = 0.0;
    for (double sign : {1.0, -1.0}) {
      const LineageResult lin = simulate_lineage(s, [sign](double) { return Heading(sign * kPi / 2.0); }, sim.dt,
                                                 th.t2 * (1.0 - 1e-9));
      for (std::size_t i = 0; i < lin.states.size(); ++i) {
        lineage_gap = std::max(lineage_gap, std::abs(lin.states[i].xd.x - p_chord_x(lin.times[i], s)));
      }
    }
    d = fmt::format("min margin={:.3g}; cloud (branching {}) attain gap={:.3g} over {} snapshots; +-pi/2 lineage gap={:.3g}",
                    base.min_floor_margin, std::max(sim.branching, kCoverageBranching), cov.worst_attain_gap,
                    cov.attain_snapshots, lineage_gap);
    return base.min_floor_margin >= -kFloorSlack && cov.attain_snapshots > 0 && cov.worst_attain_gap <= kFloorAttain &&
           lineage_gap <= kFloorAttain;
  });

  run(8, "proof-control cross-check", [&](std::string& d) {
    const Heading theta(kPi / 4.0);
    // Switches at 0.6 t1 and 0.8 t1, horizon t1; the step must divide 0.2 t1.
    const double unit = 0.2 * th.t1;
    const double dt = unit / std::ceil(unit / sim.dt - 1e-9);
    const double t_s = 3.0 * unit;
    const double t = 5.0 * unit;
    const LineageResult upto = simulate_lineage(s, proof_control_schedule(theta, t_s, t), dt, t);
    const double x_sim = upto.states.back().xd.x;
    const double x_ref = proof_control_dependent_x(theta, t_s, t, s);
    const LineageResult full = simulate_lineage(s, proof_control_schedule(theta, t_s, t), dt, 4.0 * th.tc);
    const double tc_ref = proof_control_capture_time(theta, t_s, s);
    const double tc_sim = full.capture_time.value_or(kInfinity);
    d = fmt::format("dt={:.4g} x_sim={:.15g} x_ref={:.15g} capture sim={:.6g} formula={:.6g}", dt, x_sim, x_ref, tc_sim, tc_ref);
    return std::abs(x_sim - x_ref) <= kProofControlX && std::abs(tc_sim - tc_ref) <= dt;
  });

  run(9, "Apollonius geometry", [&](std::string& d) {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_gap = 0.0;
    double worst_angle = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double a = 0.5 + 4.5 * u(rng);
      const double vd = 0.5 + 2.5 * u(rng);
      const double vi = vd * (0.05 + 0.9 * u(rng));
      const Scenario sc(a, vi, vd);
      const double t = thresholds(sc).tc * (0.01 + 0.99 * u(rng));
      worst_gap = std::max(worst_gap, apollonius_collinearity_gap(t, sc));
      const Vec2 p1 = characteristic_points(t, sc).p1;
      worst_angle = std::max(worst_angle, std::abs(std::atan2(p1.y, p1.x) - std::asin(vi / vd)));
    }
    d = fmt::format("max gap={:.3g} max elevation error={:.3g}", worst_gap, worst_angle);
    return worst_gap <= kCollinearGap && worst_angle <= kElevation;
  });

  run(10, "equal-speed limit", [&](std::string& d) {
    const Scenario eq(s.a(), s.v_d(), s.v_d());
    const double horizon = 3.0 * s.a() / s.v_d();
    bool half_disk = true;
    for (double t : {0.25 * horizon, 0.5 * horizon, horizon}) {
      const DrsRegion r = region_at(t, eq, true);
      const double expect = 0.5 * kPi * r.disk.radius * r.disk.radius;
      half_disk = half_disk && r.regime == Regime::EqualSpeed && r.chord_x == 0.0 &&
                  std::abs(region_area(r) - expect) <= 1e-12 * expect;
    }
    SimConfig ecfg = sim;
    ecfg.horizon = horizon;
    // Coarser dedup keeps the equal-speed cloud (which never thins out) tractable.
    ecfg.dedupe_resolution = std::max(sim.dedupe_resolution, 0.05 * s.a());
    double min_x = kInfinity;
    double best_sep = 0.0;
    double last_t = 0.0;
    propagate_each(eq, ecfg, [&](const CloudSnapshot& snap) {
      last_t = snap.t;
      best_sep = 0.0;
      for (const PairState& p : snap.pairs) {
        min_x = std::min(min_x, p.xd.x);
        if (p.active) best_sep = std::max(best_sep, p.separation());
      }
    });
    const LineageResult pure = simulate_lineage(eq, [](double) { return Heading(0.0); }, sim.dt, horizon);
    d = fmt::format("half-disk={} min x_d={:.3g} horizon={:.4g} reached={:.4g} pure-evasion captured={} max active sep={:.6g}",
                    half_disk, min_x, horizon, last_t, pure.capture_time.has_value(), best_sep);
    return half_disk && min_x >= -kEqualSpeedFloor && std::abs(last_t - horizon) <= 1e-9 &&
           !pure.capture_time.has_value() && std::abs(best_sep - s.a()) <= 1e-9 * s.a();
  });

  const Vec2 start = cfg.optim.start;
  const double t_opt = cfg.optim.t;
  run(11, "switch-point hypothesis", [&](std::string& d) {
    std::vector<Vec2> targets = figure_targets();
    std::mt19937_64 rng(kSeed + 11);
    for (int i = 0; i < 100; ++i) targets.push_back(random_target_inside(rng, start, s.v_i() * t_opt));
    std::size_t failures = 0;
    double worst = 0.0;
    for (const Vec2 tgt : targets) {
      const HypothesisReport h = hypothesis_extrema_check(start, tgt, t_opt, s, kHypothesisSamples);
      worst = std::max(worst, h.angular_gap);
      if (!h.max_at_extreme_x || !h.min_at_extreme_y || h.angular_gap > 2.0 * kPi / kHypothesisSamples + 1e-15) {
        ++failures;
      }
    }
    d = fmt::format("{} targets, failures={}, worst gap={:.4g} rad (limit {:.4g})", targets.size(), failures, worst,
                    2.0 * kPi / kHypothesisSamples);
    return failures == 0;
  });

  run(12, "multi-switch oracle envelope", [&](std::string& d) {
    std::mt19937_64 rng(kSeed + 12);
    double worst_excursion = -kInfinity;
    std::string counterexample;
    for (int i = 0; i < 10; ++i) {
      const Vec2 tgt = random_target_inside(rng, start, s.v_i() * t_opt);
      const ExtremaResult grid = grid_search_extrema(start, tgt, t_opt, s, kOracleGridSamples);
      for (int legs : {3, 4, 5}) {
        const OracleEnvelope env =
            multiswitch_oracle(start, tgt, t_opt, s, legs, kOracleTrials, cfg.optim.seed + 97 * i + legs, cfg.threads);
        const double exc = std::max(env.max_found - grid.max_value, grid.min_value - env.min_found);
        if (exc > worst_excursion) worst_excursion = exc;
        if (exc > kOracleSlack && counterexample.empty()) {
          counterexample = fmt::format(" COUNTEREXAMPLE target=({:.6g},{:.6g}) legs={} envelope=[{:.12g},{:.12g}] "
                                       "grid=[{:.12g},{:.12g}]",
                                       tgt.x, tgt.y, legs, env.min_found, env.max_found, grid.min_value, grid.max_value);
        }
      }
    }
    d = fmt::format("worst excursion beyond grid envelope={:.3g} (grid n={}){}", worst_excursion, kOracleGridSamples,
                    counterexample);
    return counterexample.empty();
  });

  run(13, "functional bounds", [&](std::string& d) {
    std::mt19937_64 rng(kSeed + 13);
    std::uniform_int_distribution<int> legs_dist(1, 6);
    const double lo = t_opt * w;
    const double hi = s.v_d() * t_opt;
    const double tol = 1e-9 * std::max(1.0, hi);
    std::size_t bad = 0;
    double jmin = kInfinity;
    double jmax = -kInfinity;
    for (std::size_t i = 0; i < kFunctionalTrials; ++i) {
      const Vec2 tgt = random_target_inside(rng, start, s.v_i() * t_opt);
      const int legs = legs_dist(rng);
      // A single leg cannot end inside the reachable disk; fly straight at the target's bearing instead.
      const Vec2 dir = tgt - start;
      const Vec2 rim = start + Heading(std::atan2(dir.y, dir.x)).unit() * (s.v_i() * t_opt);
      const PiecewiseTrajectory traj = legs == 1 ? trajectory_through({start, rim}, s.v_i())
                                                 : sample_multiswitch_trajectory(start, tgt, t_opt, s.v_i(), legs, rng);
      const double j = functional_value(traj, s.v_d());
      jmin = std::min(jmin, j);
      jmax = std::max(jmax, j);
      if (j < lo - tol || j > hi + tol) ++bad;
    }
    d = fmt::format("{} trajectories, J in [{:.9g}, {:.9g}] vs bounds [{:.9g}, {:.9g}], out of bounds={}",
                    kFunctionalTrials, jmin, jmax, lo, hi, bad);
    return bad == 0;
  });

  run(14, "area profile peak", [&](std::string& d) {
    const double step = th.tc / (kAreaSamples - 1);
    int best = 0;
    double best_area = -1.0;
    for (int k = 0; k < kAreaSamples; ++k) {
      const double t = std::min(k * step, th.tc);
      const double area = region_area(region_at(t, s, true));
      if (area > best_area) {
        best_area = area;
        best = k;
      }
    }
    const double t_peak = best * step;
    const double k = s.v_i() / s.v_d();
    const double slope = 2.0 * s.a() * s.v_d() * (std::asin(k) / std::sqrt(1.0 - k * k) - k);
    d = fmt::format("peak at t={:.6g}, t2={:.6g}, grid step={:.3g}; dA/dt just after t2 = {:.6g}", t_peak, th.t2, step,
                    slope);
    return std::abs(t_peak - th.t2) <= step;
  });

  run(15, "determinism", [&](std::string& d) {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / fmt::format("cbdrs_verify_{}", std::random_device{}());
    std::ostringstream sink;
    auto with_dir = [&](const std::string& name, int threads) {
      RunConfig c = cfg;
      c.out_dir = root / name;
      c.threads = threads;
      c.formats = {"csv", "json"};
      return c;
    };
    cmd_simulate(with_dir("sim_a", 1), false, sink);
    cmd_simulate(with_dir("sim_b", 1), false, sink);
    cmd_simulate(with_dir("sim_c", 3), false, sink);
    cmd_optimize(with_dir("opt_a", 1), std::nullopt, false, sink);
    cmd_optimize(with_dir("opt_b", 1), std::nullopt, false, sink);
    cmd_optimize(with_dir("opt_c", 3), std::nullopt, false, sink);
    std::string w1, w2, w3, w4;
    const bool ok = same_tree(root / "sim_a", root / "sim_b", w1) && same_tree(root / "sim_a", root / "sim_c", w2) &&
                    same_tree(root / "opt_a", root / "opt_b", w3) && same_tree(root / "opt_a", root / "opt_c", w4);
    d = fmt::format("simulate: {} / threads: {}; optimize: {} / threads: {}", w1, w2, w3, w4);
    fs::remove_all(root);
    return ok;
  });

  return report;
}

void print_report(const AcceptanceReport& report, std::ostream& out) {
  std::size_t passed = 0;
  for (const CriterionResult& c : report.criteria) {
    out << fmt::format("{} [{:2}] {:<30} ({:.1f}s) {}\n", c.passed ? "PASS" : "FAIL", c.id, c.name, c.seconds, c.detail);
    if (c.passed) ++passed;
  }
  for (const std::string& note : report.diagnostics) out << "note: " << note << "\n";
  out << fmt::format("{}/{} criteria passed\n", passed, report.criteria.size());
}

}  // namespace cbdrs
