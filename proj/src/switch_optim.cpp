#include "cbdrs/switch_optim.hpp"

#include <algorithm>
#include <thread>

namespace cbdrs {

namespace {

double tolerance_for(double length) { return 1e-9 * std::max(1.0, length); }

int circular_index_gap(int i, int j, int n) {
  const int d = std::abs(i - j) % n;
  return std::min(d, n - d);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vec2 sample_in_ellipse(const EllipseLocus& e, std::mt19937_64& rng, bool on_boundary) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double angle = -kPi + 2.0 * kPi * unit(rng);
  if (on_boundary) return ellipse_point(e, angle);
  // Uniform over the filled ellipse: sqrt radius in the unit disk, then scale.
  const double rho = std::sqrt(unit(rng));
  const double px = e.semi_major() * rho * std::cos(angle);
  const double py = e.semi_minor() * rho * std::sin(angle);
  const double phi = e.orientation();
  return e.center() + Vec2{px * std::cos(phi) - py * std::sin(phi), px * std::sin(phi) + py * std::cos(phi)};
}

}  // namespace

double PiecewiseTrajectory::total_duration() const {
  double total = 0.0;
  for (const auto& leg : legs) total += leg.duration;
  return total;
}

Vec2 PiecewiseTrajectory::endpoint() const {
  Vec2 p = start;
  for (const auto& leg : legs) p = p + leg.heading.unit() * (leg.duration * speed);
  return p;
}

PiecewiseTrajectory trajectory_through(const std::vector<Vec2>& waypoints, double speed) {
  if (waypoints.empty()) throw std::invalid_argument("trajectory_through: no waypoints");
  if (!(speed > 0.0)) throw std::invalid_argument("trajectory_through: speed must be > 0");
  PiecewiseTrajectory traj;
  traj.start = waypoints.front();
  traj.speed = speed;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Vec2 d = waypoints[i] - waypoints[i - 1];
    const double len = d.norm();
    // A zero-length leg carries no heading information; 0 is as good as any.
    const Heading h = len > 0.0 ? Heading(std::atan2(d.y, d.x)) : Heading(0.0);
    traj.legs.push_back({h, len / speed});
  }
  return traj;
}

EllipseLocus switch_ellipse(Vec2 start, Vec2 target, double t, double v_i) {
  if (!(t >= 0.0) || !(v_i > 0.0)) throw std::invalid_argument("switch_ellipse: need t >= 0 and v_i > 0");
  const double budget = v_i * t;
  const double tol = tolerance_for(budget);
  if (distance(start, target) > budget + tol) throw DomainError("target outside R_I(t)");
  return EllipseLocus(start, target, budget, tol);
}

PiecewiseTrajectory single_switch_trajectory(Vec2 start, Vec2 sw, Vec2 target, double v_i, double t) {
  const EllipseLocus e = switch_ellipse(start, target, t, v_i);
  if (std::abs(e.focal_sum(sw) - e.string_length()) > tolerance_for(e.string_length())) {
    throw DomainError("switch point is not on the switch ellipse");
  }
  return trajectory_through({start, sw, target}, v_i);
}

double functional_value(const PiecewiseTrajectory& traj, double v_d) {
  if (v_d < traj.speed) throw std::invalid_argument("functional_value: v_d must be >= v_i");
  double total = 0.0;
  for (const auto& leg : traj.legs) {
    const double ydot = traj.speed * std::sin(leg.heading.rad());
    total += leg.duration * std::sqrt(std::max(0.0, v_d * v_d - ydot * ydot));
  }
  return total;
}

std::vector<EllipseSample> ellipse_samples(Vec2 start, Vec2 target, double t, const Scenario& s, int n) {
  if (n < 8) throw std::invalid_argument("grid search: n must be >= 8");
  const EllipseLocus e = switch_ellipse(start, target, t, s.v_i());
  std::vector<EllipseSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const double angle = kPi * static_cast<double>(2 * k - n) / static_cast<double>(n);
    const Vec2 p = ellipse_point(e, angle);
    // Built directly: ellipse_point already satisfies the focal sum to rounding.
    const double value = functional_value(trajectory_through({start, p, target}, s.v_i()), s.v_d());
    out.push_back({angle, p, value});
  }
  return out;
}

ExtremaResult extrema_of(const std::vector<EllipseSample>& samples, bool degenerate) {
  if (samples.empty()) throw std::invalid_argument("extrema_of: no samples");
  ExtremaResult r;
  r.samples = static_cast<int>(samples.size());
  r.degenerate = degenerate;
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                            [](const auto& a, const auto& b) { return a.value < b.value; });
  r.max_value = hi->value;
  r.min_value = lo->value;
  const double tie_max = kTieEps * std::max(1.0, std::abs(r.max_value));
  const double tie_min = kTieEps * std::max(1.0, std::abs(r.min_value));
  for (int i = 0; i < r.samples; ++i) {
    const EllipseSample& smp = samples[static_cast<std::size_t>(i)];
    if (r.max_value - smp.value <= tie_max) {
      r.max_points.push_back(smp.point);
      r.max_indices.push_back(i);
    }
    if (smp.value - r.min_value <= tie_min) {
      r.min_points.push_back(smp.point);
      r.min_indices.push_back(i);
    }
  }
  return r;
}

ExtremaResult grid_search_extrema(Vec2 start, Vec2 target, double t, const Scenario& s, int n) {
  const EllipseLocus e = switch_ellipse(start, target, t, s.v_i());
  return extrema_of(ellipse_samples(start, target, t, s, n), e.degenerate());
}

HypothesisReport hypothesis_extrema_check(Vec2 start, Vec2 target, double t, const Scenario& s, int n) {
  const EllipseLocus e = switch_ellipse(start, target, t, s.v_i());
  HypothesisReport rep;
  if (e.degenerate()) {
    rep.max_at_extreme_x = rep.min_at_extreme_y = true;
    return rep;
  }
  const auto samples = ellipse_samples(start, target, t, s, n);
  const ExtremaResult ex = extrema_of(samples, false);

  auto arg = [&](auto key) {
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (key(samples[static_cast<std::size_t>(i)].point) > key(samples[static_cast<std::size_t>(best)].point)) best = i;
    }
    return best;
  };
  const int max_x = arg([](Vec2 p) { return p.x; });
  const int min_x = arg([](Vec2 p) { return -p.x; });
  const int max_y = arg([](Vec2 p) { return p.y; });
  const int min_y = arg([](Vec2 p) { return -p.y; });

  auto worst_gap = [&](const std::vector<int>& found, int pa, int pb) {
    int worst = 0;
    for (int i : found) worst = std::max(worst, std::min(circular_index_gap(i, pa, n), circular_index_gap(i, pb, n)));
    return worst;
  };
  const int gap_max = worst_gap(ex.max_indices, max_x, min_x);
  const int gap_min = worst_gap(ex.min_indices, max_y, min_y);
  const double step = 2.0 * kPi / n;
  rep.angular_gap = std::max(gap_max, gap_min) * step;
  rep.max_at_extreme_x = gap_max <= 1;
  rep.min_at_extreme_y = gap_min <= 1;
  return rep;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(trial)));
}

PiecewiseTrajectory sample_multiswitch_trajectory(Vec2 start, Vec2 target, double t, double v_i, int legs,
                                                  std::mt19937_64& rng) {
  if (legs < 1) throw std::invalid_argument("multiswitch: legs must be >= 1");
  const double budget = v_i * t;
  const double tol = tolerance_for(budget);
  if (distance(start, target) > budget + tol) throw DomainError("target outside R_I(t)");

  std::vector<Vec2> waypoints{start};
  double remaining = budget;
  for (int k = 0; k + 2 < legs; ++k) {
    const Vec2 from = waypoints.back();
    const Vec2 p = sample_in_ellipse(EllipseLocus(from, target, remaining, tol), rng, false);
    remaining -= distance(from, p);
    waypoints.push_back(p);
  }
  if (legs >= 2) {
    const Vec2 from = waypoints.back();
    waypoints.push_back(sample_in_ellipse(EllipseLocus(from, target, remaining, tol), rng, true));
  }
  waypoints.push_back(target);
  return trajectory_through(waypoints, v_i);
}

OracleEnvelope multiswitch_oracle(Vec2 start, Vec2 target, double t, const Scenario& s, int legs,
                                  std::size_t trials, std::uint64_t seed, int threads) {
  if (legs < 2) throw std::invalid_argument("multiswitch_oracle: legs must be >= 2");
  if (trials == 0) throw std::invalid_argument("multiswitch_oracle: trials must be > 0");
  if (!(distance(start, target) < s.v_i() * t)) {
    throw DomainError("multiswitch_oracle: target must lie strictly inside R_I(t)");
  }
  const double tol = tolerance_for(s.v_i() * t);
  const std::size_t retry_budget = 100 * trials;

  struct Partial {
    double lo = kInfinity;
    double hi = -kInfinity;
    std::size_t retries = 0;
  };
  auto run = [&](std::size_t begin, std::size_t end, Partial& out) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::uint64_t attempt = 0;; ++attempt) {
        std::mt19937_64 rng = trial_rng(seed, (static_cast<std::uint64_t>(i) << 8) ^ attempt);
        const PiecewiseTrajectory traj = sample_multiswitch_trajectory(start, target, t, s.v_i(), legs, rng);
        const bool closes = distance(traj.endpoint(), target) <= tol &&
                            std::abs(traj.total_duration() - t) <= tol / s.v_i();
        if (closes) {
          const double j = functional_value(traj, s.v_d());
          out.lo = std::min(out.lo, j);
          out.hi = std::max(out.hi, j);
          break;
        }
        if (++out.retries > retry_budget || attempt >= 255) {
          throw std::runtime_error("multiswitch_oracle: infeasible sampling after retry budget");
        }
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, trials);
  std::vector<Partial> parts(workers);
  if (workers == 1) {
    run(0, trials, parts[0]);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { run(trials * w / workers, trials * (w + 1) / workers, parts[w]); });
    }
  }

  OracleEnvelope env;
  env.min_found = kInfinity;
  env.max_found = -kInfinity;
  env.trials = trials;
  for (const Partial& p : parts) {
    env.min_found = std::min(env.min_found, p.lo);
    env.max_found = std::max(env.max_found, p.hi);
    env.retries += p.retries;
  }
  return env;
}

std::vector<FirstIntegralRow> euler_lagrange_residual(const PiecewiseTrajectory& traj, const Scenario& s) {
  std::vector<FirstIntegralRow> rows;
  for (const auto& leg : traj.legs) {
    const Vec2 u = leg.heading.unit();
    const double xdot = traj.speed * u.x;
    const double ydot = traj.speed * u.y;
    rows.push_back({xdot, ydot / std::sqrt(s.v_d() * s.v_d() - ydot * ydot)});
  }
  return rows;
}

}  // namespace cbdrs
