#include "cbdrs/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cbdrs {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(out)) throw std::invalid_argument("expected a number, got '" + v + "'");
  return out;
}

template <typename Int>
Int parse_int(const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  }
  return out;
}

std::optional<double> parse_auto_real(const std::string& v) {
  if (v == "auto") return std::nullopt;
  return parse_real(v);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"scenario.a", [](RunConfig& c, const std::string& v) { c.a = parse_real(v); }},
      {"scenario.v_i", [](RunConfig& c, const std::string& v) { c.v_i = parse_real(v); }},
      {"scenario.v_d", [](RunConfig& c, const std::string& v) { c.v_d = parse_real(v); }},
      {"scenario.capture_eps", [](RunConfig& c, const std::string& v) { c.capture_eps = parse_auto_real(v); }},
      {"sim.dt", [](RunConfig& c, const std::string& v) { c.dt = parse_auto_real(v); }},
      {"sim.branching", [](RunConfig& c, const std::string& v) { c.branching = parse_int<int>(v); }},
      {"sim.dedupe_resolution",
       [](RunConfig& c, const std::string& v) { c.dedupe_resolution = parse_auto_real(v); }},
      {"sim.max_pairs", [](RunConfig& c, const std::string& v) { c.max_pairs = parse_int<std::size_t>(v); }},
      {"sim.horizon", [](RunConfig& c, const std::string& v) { c.horizon = parse_auto_real(v); }},
      {"sim.threads", [](RunConfig& c, const std::string& v) { c.threads = parse_int<int>(v); }},
      {"optim.n_samples", [](RunConfig& c, const std::string& v) { c.optim.n_samples = parse_int<int>(v); }},
      {"optim.oracle_legs", [](RunConfig& c, const std::string& v) { c.optim.oracle_legs = parse_int<int>(v); }},
      {"optim.oracle_trials",
       [](RunConfig& c, const std::string& v) { c.optim.oracle_trials = parse_int<std::size_t>(v); }},
      {"optim.seed", [](RunConfig& c, const std::string& v) { c.optim.seed = parse_int<std::uint64_t>(v); }},
      {"optim.t", [](RunConfig& c, const std::string& v) { c.optim.t = parse_real(v); }},
      {"optim.start_x", [](RunConfig& c, const std::string& v) { c.optim.start.x = parse_real(v); }},
      {"optim.start_y", [](RunConfig& c, const std::string& v) { c.optim.start.y = parse_real(v); }},
      {"output.dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
      {"output.formats",
       [](RunConfig& c, const std::string& v) {
         auto f = split_list(v);
         for (const auto& x : f) {
           if (x != "csv" && x != "json" && x != "svg") throw std::invalid_argument("unknown format '" + x + "'");
         }
         c.formats = std::move(f);
       }},
  };
  return table;
}

}  // namespace

Scenario RunConfig::scenario() const { return Scenario(a, v_i, v_d, capture_eps.value_or(-1.0)); }

SimConfig RunConfig::sim() const {
  const Scenario s = scenario();
  SimConfig cfg = SimConfig::defaults_for(s);
  if (dt) {
    cfg.dt = *dt;
    cfg.dedupe_resolution = s.v_i() > 0.0 ? s.v_i() * cfg.dt / 10.0 : 1e-3 * s.a();
  }
  if (dedupe_resolution) cfg.dedupe_resolution = *dedupe_resolution;
  if (horizon) cfg.horizon = *horizon;
  cfg.branching = branching;
  cfg.max_pairs = max_pairs;
  cfg.threads = threads;
  cfg.validate(s);
  return cfg;
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    try {
      it->second(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + " (" + key + "): " + e.what());
    }
  }
  // Surface invariant violations at load time rather than mid-run.
  (void)cfg.scenario();
  (void)cfg.sim();
  if (cfg.optim.n_samples < 8) throw std::invalid_argument("optim.n_samples must be >= 8");
  if (cfg.optim.oracle_legs < 2) throw std::invalid_argument("optim.oracle_legs must be >= 2");
  if (cfg.optim.oracle_trials == 0) throw std::invalid_argument("optim.oracle_trials must be > 0");
  if (!(cfg.optim.t > 0.0)) throw std::invalid_argument("optim.t must be > 0");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string default_config_text() {
  return R"(# Default engagement and experiment parameters.
scenario.a = 1.0
scenario.v_i = 0.5
scenario.v_d = 1.0
scenario.capture_eps = auto     # 1e-6 * a

sim.dt = 0.2
sim.branching = 18
sim.dedupe_resolution = auto    # v_i * dt / 10
sim.max_pairs = 5000000
sim.horizon = auto              # t_c, or 3 a / v_d at equal speeds
sim.threads = 1

optim.n_samples = 360
optim.oracle_legs = 3
optim.oracle_trials = 10000
optim.seed = 1
optim.t = 8.0
optim.start_x = 0.0
optim.start_y = 0.0

output.dir = out
output.formats = csv, json
)";
}

}  // namespace cbdrs
