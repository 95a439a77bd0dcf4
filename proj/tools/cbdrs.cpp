// Command-line driver: region, simulate, optimize, verify.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "cbdrs/commands.hpp"
#include "cbdrs/config.hpp"

namespace {

cbdrs::Vec2 parse_target(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("--target expects x,y");
  std::size_t used_x = 0;
  std::size_t used_y = 0;
  const std::string xs = text.substr(0, comma);
  const std::string ys = text.substr(comma + 1);
  const double x = std::stod(xs, &used_x);
  const double y = std::stod(ys, &used_y);
  if (used_x != xs.size() || used_y != ys.size()) throw std::invalid_argument("--target expects x,y");
  return {x, y};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-bearing dependent reachable set toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool svg = false;
  app.add_option("--config", config_path, "Config file (flat key = value)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  app.add_option("--seed", seed, "Oracle seed (overrides optim.seed)");
  app.add_flag("--svg", svg, "Also write SVG figures");

  double t = 0.0;
  auto* region = app.add_subcommand("region", "Analytic region at time t");
  region->add_option("--t", t, "Time")->required();

  auto* simulate = app.add_subcommand("simulate", "Point-cloud propagation with containment report");

  std::string target_text;
  auto* optimize = app.add_subcommand("optimize", "Switch-point ellipse extrema and oracle");
  optimize->add_option("--target", target_text, "Target x,y (default: built-in figure targets)");

  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");

  // Global options are accepted after the subcommand too.
  for (auto* sub : {region, simulate, optimize, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cbdrs::kExitOk : cbdrs::kExitInvalidInput;
  }

  try {
    cbdrs::RunConfig cfg = config_path.empty() ? cbdrs::parse_config(cbdrs::default_config_text())
                                               : cbdrs::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) cfg.optim.seed = *seed;

    if (*region) return cbdrs::cmd_region(cfg, t, svg, std::cout);
    if (*simulate) return cbdrs::cmd_simulate(cfg, svg, std::cout);
    if (*optimize) {
      std::optional<cbdrs::Vec2> target;
      if (!target_text.empty()) target = parse_target(target_text);
      return cbdrs::cmd_optimize(cfg, target, svg, std::cout);
    }
    return cbdrs::cmd_verify(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cbdrs::exit_code_for(e);
  }
}
