#include "cbdrs/cloud.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace cbdrs {

namespace {

struct KeyHash {
  std::size_t operator()(const QuantKey& k) const noexcept {
    auto mix = [](std::uint64_t h, std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    };
    std::uint64_t h = static_cast<std::uint64_t>(k.ix) * 0xff51afd7ed558ccdULL;
    h = mix(h, static_cast<std::uint64_t>(k.iy) * 0xc4ceb9fe1a85ec53ULL);
    h = mix(h, static_cast<std::uint64_t>(k.id));
    return static_cast<std::size_t>(h);
  }
};

/// Per-heading displacement over one step. Shared by the cloud and single
/// lineage paths so both use identical arithmetic.
struct StepIncrement {
  double dxi;
  double dy;
  double dxd;
  double closing;
};

StepIncrement make_increment(Heading psi, double dt, const Scenario& s) {
  const Vec2 u = psi.unit();
  return {dt * s.v_i() * u.x, dt * s.v_i() * u.y, dt * dependent_velocity(psi, s).x,
          dt * closing_speed(psi, s)};
}

std::pair<PairState, bool> apply(const PairState& p, const StepIncrement& inc, const Scenario& s) {
  PairState c;
  const double y = p.xi.y + inc.dy;
  c.xi = {p.xi.x + inc.dxi, y};
  c.xd = {p.xd.x + inc.dxd, y};
  const bool captured = c.separation() <= s.capture_eps() || p.separation() - inc.closing <= 0.0;
  c.active = !captured;
  return {c, captured};
}

struct Keyed {
  QuantKey key;
  PairState pair;
};

/// First-wins deduplication preserving insertion order.
class FirstWins {
 public:
  explicit FirstWins(std::size_t reserve = 0) { index_.reserve(reserve); }

  void offer(const QuantKey& k, const PairState& p) {
    if (index_.try_emplace(k, items_.size()).second) items_.push_back({k, p});
  }

  std::size_t size() const { return items_.size(); }
  std::vector<Keyed>& items() { return items_; }

 private:
  std::unordered_map<QuantKey, std::size_t, KeyHash> index_;
  std::vector<Keyed> items_;
};

struct ChunkResult {
  std::vector<Keyed> active;
  std::vector<Keyed> captured;
  std::size_t captured_count = 0;
};

ChunkResult expand_chunk(const std::vector<PairState>& parents, std::size_t begin, std::size_t end,
                         const std::vector<StepIncrement>& fan, const SimConfig& cfg,
                         const Scenario& s) {
  FirstWins active((end - begin) * 2);
  FirstWins captured;
  ChunkResult out;
  for (std::size_t i = begin; i < end; ++i) {
    const PairState& parent = parents[i];
    if (!parent.active) continue;
    for (const StepIncrement& inc : fan) {
      auto [child, was_captured] = apply(parent, inc, s);
      const QuantKey key = quantize(child, cfg.dedupe_resolution);
      if (was_captured) {
        ++out.captured_count;
        if (cfg.keep_captured) captured.offer(key, child);
      } else {
        active.offer(key, child);
      }
    }
  }
  out.active = std::move(active.items());
  out.captured = std::move(captured.items());
  return out;
}

void merge_sorted(std::vector<ChunkResult>& chunks, bool captured_side, std::vector<PairState>& out) {
  FirstWins merged;
  for (ChunkResult& c : chunks) {
    for (const Keyed& k : captured_side ? c.captured : c.active) merged.offer(k.key, k.pair);
  }
  auto& items = merged.items();
  std::sort(items.begin(), items.end(), [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  for (const Keyed& k : items) out.push_back(k.pair);
}

}  // namespace

std::size_t CloudSnapshot::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const PairState& p) { return p.active; }));
}

SimConfig SimConfig::defaults_for(const Scenario& s) {
  SimConfig cfg;
  cfg.dt = 0.2;
  cfg.branching = 18;
  cfg.dedupe_resolution = s.v_i() > 0.0 ? s.v_i() * cfg.dt / 10.0 : 1e-3 * s.a();
  const double tc = thresholds(s).tc;
  cfg.horizon = std::isfinite(tc) ? tc : 3.0 * s.a() / s.v_d();
  return cfg;
}

void SimConfig::validate(const Scenario& s) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("sim: dt must be > 0");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw std::invalid_argument("sim: horizon must be finite and >= dt");
  const int min_branching = s.v_i() == 0.0 ? 1 : 2;
  if (branching < min_branching) throw std::invalid_argument("sim: branching must be >= 2");
  if (!(dedupe_resolution > 0.0) || !std::isfinite(dedupe_resolution)) {
    throw std::invalid_argument("sim: dedupe_resolution must be > 0");
  }
  if (max_pairs == 0) throw std::invalid_argument("sim: max_pairs must be > 0");
  if (threads < 1) throw std::invalid_argument("sim: threads must be >= 1");
}

QuantKey quantize(const PairState& p, double resolution) {
  return {static_cast<std::int64_t>(std::floor(p.xi.x / resolution)),
          static_cast<std::int64_t>(std::floor(p.xi.y / resolution)),
          static_cast<std::int64_t>(std::floor(p.xd.x / resolution))};
}

std::vector<Heading> heading_fan(int branching) {
  if (branching < 1) throw std::invalid_argument("heading_fan: branching must be >= 1");
  std::vector<Heading> fan;
  fan.reserve(static_cast<std::size_t>(branching));
  for (int k = 1; k <= branching; ++k) {
    // Integer numerator keeps 0 and pi exact.
    fan.emplace_back(kPi * static_cast<double>(2 * k - branching) / static_cast<double>(branching));
  }
  return fan;
}

CloudSnapshot initial_snapshot(const Scenario& s) {
  CloudSnapshot snap;
  snap.t = 0.0;
  snap.pairs.push_back({s.independent_start(), {0.0, 0.0}, true});
  return snap;
}

std::pair<PairState, bool> advance_pair(const PairState& p, Heading psi, double dt, const Scenario& s) {
  return apply(p, make_increment(psi, dt, s), s);
}

CloudSnapshot step(const CloudSnapshot& snapshot, const SimConfig& cfg, const Scenario& s,
                   std::optional<double> dt_override) {
  const double dt = dt_override.value_or(cfg.dt);
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");

  std::vector<StepIncrement> fan;
  for (Heading h : heading_fan(cfg.branching)) fan.push_back(make_increment(h, dt, s));

  const std::vector<PairState>& parents = snapshot.pairs;
  const std::size_t n = parents.size();
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(cfg.threads), 1,
                                                      std::max<std::size_t>(1, n / 1024));
  std::vector<ChunkResult> chunks(threads);
  if (threads == 1) {
    chunks[0] = expand_chunk(parents, 0, n, fan, cfg, s);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t c = 0; c < threads; ++c) {
      const std::size_t begin = n * c / threads;
      const std::size_t end = n * (c + 1) / threads;
      pool.emplace_back([&, c, begin, end] { chunks[c] = expand_chunk(parents, begin, end, fan, cfg, s); });
    }
  }

  CloudSnapshot next;
  next.t = snapshot.t + dt;
  next.captured_count = snapshot.captured_count;
  for (const ChunkResult& c : chunks) next.captured_count += c.captured_count;
  merge_sorted(chunks, false, next.pairs);
  if (next.pairs.size() > cfg.max_pairs) throw BudgetError("cloud budget exceeded");
  merge_sorted(chunks, true, next.pairs);
  return next;
}

void propagate_each(const Scenario& s, const SimConfig& cfg,
                    const std::function<void(const CloudSnapshot&)>& visit) {
  cfg.validate(s);
  CloudSnapshot snap = initial_snapshot(s);
  visit(snap);
  for (long k = 0;; ++k) {
    if (snap.active_count() == 0) break;
    const double remaining = cfg.horizon - snap.t;
    if (remaining <= 1e-9 * cfg.dt) break;
    const bool partial = remaining < cfg.dt * (1.0 - 1e-9);
    CloudSnapshot next = step(snap, cfg, s, partial ? std::optional<double>(remaining) : std::nullopt);
    next.t = partial ? cfg.horizon : std::min(static_cast<double>(k + 1) * cfg.dt, cfg.horizon);
    snap = std::move(next);
    visit(snap);
  }
}

std::vector<CloudSnapshot> propagate(const Scenario& s, const SimConfig& cfg) {
  std::vector<CloudSnapshot> out;
  propagate_each(s, cfg, [&](const CloudSnapshot& snap) { out.push_back(snap); });
  return out;
}

std::vector<BinBounds> empirical_bounds(const CloudSnapshot& snapshot, int bins, const Scenario& s) {
  if (bins < 1) throw std::invalid_argument("empirical_bounds: bins must be >= 1");
  if (snapshot.active_count() == 0) throw std::invalid_argument("empty cloud");

  const double half = s.v_i() * snapshot.t;
  const double width = 2.0 * half / bins;
  struct Acc {
    double lo = kInfinity;
    double hi = -kInfinity;
    bool used = false;
  };
  std::vector<Acc> acc(static_cast<std::size_t>(bins));
  for (const PairState& p : snapshot.pairs) {
    if (!p.active) continue;
    int b = width > 0.0 ? static_cast<int>(std::floor((p.xd.y + half) / width)) : 0;
    b = std::clamp(b, 0, bins - 1);
    Acc& a = acc[static_cast<std::size_t>(b)];
    a.lo = std::min(a.lo, p.xd.x);
    a.hi = std::max(a.hi, p.xd.x);
    a.used = true;
  }
  std::vector<BinBounds> out;
  for (int b = 0; b < bins; ++b) {
    const Acc& a = acc[static_cast<std::size_t>(b)];
    if (!a.used) continue;
    out.push_back({-half + b * width, -half + (b + 1) * width, a.lo, a.hi});
  }
  return out;
}

ContainmentReport containment_report(const CloudSnapshot& snapshot, const Scenario& s,
                                     bool use_hypothesis, double cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("containment_report: cell_size must be > 0");
  const DrsRegion region = region_at(snapshot.t, s, use_hypothesis);
  const double tol = s.eps_geom();

  ContainmentReport rep;
  rep.t = snapshot.t;
  rep.regime = region.regime;

  struct CellHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& c) const noexcept {
      return KeyHash{}(QuantKey{c.first, c.second, 0});
    }
  };
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, bool, CellHash> occupied;
  for (const PairState& p : snapshot.pairs) {
    if (!p.active) continue;
    ++rep.active;
    const double depth = violation_depth(region, p.xd);
    rep.max_violation_depth = std::max(rep.max_violation_depth, depth);
    if (depth > tol) ++rep.violations;
    occupied.emplace(std::pair{static_cast<std::int64_t>(std::floor(p.xd.x / cell_size)),
                               static_cast<std::int64_t>(std::floor(p.xd.y / cell_size))},
                     true);
  }

  if (!region.degenerate()) {
    const double r = region.disk.radius;
    const double half = region.chord_half_height();
    const auto i0 = static_cast<std::int64_t>(std::floor(region.chord_x / cell_size));
    const auto i1 = static_cast<std::int64_t>(std::floor(r / cell_size));
    const auto j0 = static_cast<std::int64_t>(std::floor(-half / cell_size));
    const auto j1 = static_cast<std::int64_t>(std::floor(half / cell_size));
    for (std::int64_t i = i0; i <= i1; ++i) {
      const double cx = (static_cast<double>(i) + 0.5) * cell_size;
      for (std::int64_t j = j0; j <= j1; ++j) {
        const double cy = (static_cast<double>(j) + 0.5) * cell_size;
        if (cx < region.chord_x || std::hypot(cx, cy) > r) continue;
        ++rep.total_cells;
        if (occupied.contains({i, j})) ++rep.covered_cells;
      }
    }
  }
  rep.coverage_fraction =
      rep.total_cells == 0 ? 1.0 : static_cast<double>(rep.covered_cells) / static_cast<double>(rep.total_cells);
  return rep;
}

LineageResult simulate_lineage(const Scenario& s, const HeadingSchedule& schedule, double dt,
                               double horizon) {
  if (!(dt > 0.0) || !(horizon >= 0.0)) throw std::invalid_argument("simulate_lineage: bad dt/horizon");
  LineageResult out;
  PairState p{s.independent_start(), {0.0, 0.0}, true};
  double t = 0.0;
  out.times.push_back(t);
  out.states.push_back(p);
  for (long k = 0;; ++k) {
    const double remaining = horizon - t;
    if (remaining <= 1e-9 * dt) break;
    const bool partial = remaining < dt * (1.0 - 1e-9);
    const double h = partial ? remaining : dt;
    const Heading psi = schedule(t + 0.5 * h);
    auto [child, captured] = apply(p, make_increment(psi, h, s), s);
    t = partial ? horizon : static_cast<double>(k + 1) * dt;
    p = child;
    out.times.push_back(t);
    out.states.push_back(p);
    if (captured) {
      out.capture_time = t;
      break;
    }
  }
  return out;
}

HeadingSchedule proof_control_schedule(Heading theta, double t_s, double t) {
  const double split = 0.5 * (t + t_s);
  return [=](double tau) {
    if (tau < t_s) return theta;
    if (tau < split) return Heading(kPi / 2.0);
    return Heading(-kPi / 2.0);
  };
}

}  // namespace cbdrs
