#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavplan/commands.hpp"

namespace {

std::optional<uavplan::ScenarioKind> kind_of(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return uavplan::parse_scenario_kind(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV access-point deployment planner"};
  app.require_subcommand(1);

  std::string kind;
  std::size_t variant = 0;
  std::uint64_t seed = 0;
  std::string out;

  auto* generate = app.add_subcommand("generate", "Write a generated scenario file");
  generate->add_option("--scenario", kind, "Scenario family: A, B or C")->required();
  generate->add_option("--variant", variant, "Variant index within the family")->default_val(0);
  generate->add_option("--seed", seed, "Placement seed")->default_val(1);
  generate->add_option("--out", out, "Output scenario JSON")->required();

  uavplan::PlanRequest plan;
  std::string scenario_path, config_path, baseline;
  std::optional<std::uint64_t> plan_seed;
  auto* plan_cmd = app.add_subcommand("plan", "Plan a deployment for a scenario file");
  plan_cmd->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  plan_cmd->add_option("--config", config_path, "Run configuration JSON");
  plan_cmd->add_option("--out", out, "Results JSON");
  plan_cmd->add_option("--seed", plan_seed, "Swarm seed");
  plan_cmd->add_option("--baseline", baseline, "Run a baseline instead: fixed-altitude or fixed-n");
  plan_cmd->add_flag("--dump-zones", plan.dump_zones, "Also write <out>.zones.json");
  plan_cmd->add_flag("--pso-trace", plan.pso_trace, "Also write <out>.pso_trace.csv");
  plan_cmd->add_flag("--dump-pool", plan.dump_pool, "Also write <out>.pool.json");
  plan_cmd->add_flag("--validation-csv", plan.validation_csv, "Also write <out>.validation.csv");

  uavplan::SweepRequest sweep;
  std::string sweep_config;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run seeded runs of a scenario family with all methods");
  sweep_cmd->add_option("--scenario", kind, "Scenario family: A, B or C")->required();
  sweep_cmd->add_option("--config", sweep_config, "Run configuration JSON");
  sweep_cmd->add_option("--runs", sweep.runs, "Runs per variant")->default_val(30);
  sweep_cmd->add_option("--seed", sweep.base_seed, "Base seed; run r uses base + r")->default_val(0);
  sweep_cmd->add_option("--variant", sweep.variants, "Restrict to these variant indices");
  sweep_cmd->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return uavplan::kExitConfig;
  }

  try {
    if (generate->parsed()) {
      return uavplan::cmd_generate(*kind_of(kind), variant, seed, out, std::cerr);
    }
    if (plan_cmd->parsed()) {
      plan.scenario = scenario_path;
      if (!config_path.empty()) plan.config = config_path;
      if (!out.empty()) plan.out = out;
      plan.seed = plan_seed;
      if (!baseline.empty()) plan.baseline = uavplan::parse_baseline_kind(baseline);
      return uavplan::cmd_plan(plan, std::cerr);
    }
    sweep.kind = *kind_of(kind);
    if (!sweep_config.empty()) sweep.config = sweep_config;
    sweep.out_dir = out;
    return uavplan::cmd_sweep(sweep, std::cerr);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return uavplan::kExitConfig;
  }
}
