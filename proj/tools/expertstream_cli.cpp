// Command-line harness: simulate single runs, sweep parameter grids, play
// adaptive attacks, run distinguisher trials, and plot the resulting CSVs.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expertstream/experiment.hpp"

namespace {

using expertstream::ConfigError;
using expertstream::ExperimentConfig;

// Common per-subcommand options; precedence is config file < --set < named flags.
struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::string out;
  std::optional<std::size_t> jobs;
  bool force = false;
  bool warn_params = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key=value config file");
  cmd->add_option("--set", args.sets, "override a config key (key=value, repeatable)");
  cmd->add_option("--seed", args.seed, "single root seed");
  cmd->add_option("--seeds", args.seeds, "seed list: '3,5,9' or '0..19'");
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--jobs", args.jobs, "worker threads for sweeps")
      ->envname("EXPERTSTREAM_JOBS");
  cmd->add_flag("--force", args.force, "overwrite an existing output path");
  cmd->add_flag("--warn-params", args.warn_params,
                "demote parameter-check failures to warnings");
}

ExperimentConfig resolve_config(const CommonArgs& args) {
  std::map<std::string, std::string> kv;
  if (!args.config_path.empty()) kv = expertstream::parse_config_file(args.config_path);
  for (const std::string& item : args.sets) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set expects key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (args.seed) kv["seed"] = std::to_string(*args.seed);
  if (!args.seeds.empty()) kv["seeds"] = args.seeds;
  if (!args.out.empty()) kv["out"] = args.out;
  if (args.jobs) kv["jobs"] = std::to_string(*args.jobs);
  if (args.force) kv["force"] = "1";
  if (args.warn_params) kv["warn_params"] = "1";
  return expertstream::make_config(kv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memory-bounded experts simulator"};
  app.require_subcommand(1);

  CommonArgs sim_args, sweep_args, attack_args, dist_args;
  CLI::App* sim = app.add_subcommand("simulate", "run one algorithm over a stream per seed");
  add_common(sim, sim_args);
  CLI::App* sweep = app.add_subcommand("sweep", "run an algorithm x R x seed grid");
  add_common(sweep, sweep_args);
  CLI::App* attack = app.add_subcommand("attack", "play an adaptive adversary against an algorithm");
  add_common(attack, attack_args);
  CLI::App* dist = app.add_subcommand("distinguish", "label planted-vs-fair instances via a run");
  add_common(dist, dist_args);

  std::string plot_csv, plot_out;
  bool plot_force = false;
  CLI::App* plot = app.add_subcommand("plot", "render a trace or sweep CSV as a standalone SVG");
  plot->add_option("csv", plot_csv, "input CSV (trace or sweep schema)")->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_flag("--force", plot_force, "overwrite an existing output file");

  CLI::App* selftest = app.add_subcommand("selftest", "quick library health checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return expertstream::kExitConfig;
  }

  try {
    if (sim->parsed()) return expertstream::cmd_simulate(resolve_config(sim_args));
    if (sweep->parsed()) return expertstream::cmd_sweep(resolve_config(sweep_args));
    if (attack->parsed()) return expertstream::cmd_attack(resolve_config(attack_args));
    if (dist->parsed()) return expertstream::cmd_distinguish(resolve_config(dist_args));
    if (plot->parsed()) return expertstream::cmd_plot(plot_csv, plot_out, plot_force);
    if (selftest->parsed()) return expertstream::cmd_selftest();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return expertstream::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return expertstream::kExitConfig;
  }
  return expertstream::kExitConfig;
}
