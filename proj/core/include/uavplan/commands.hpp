#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "uavplan/scenario.hpp"

namespace uavplan {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitIo = 2,
  kExitUnservable = 3,
  kExitConfig = 4,
  kExitAllRunsFailed = 5,
};

/// Writes generate_scenario(kind, variant, seed) with default channel and
/// swarm sections to `out`.
int cmd_generate(ScenarioKind kind, std::size_t variant, std::uint64_t seed, const std::filesystem::path& out,
                 std::ostream& log);

struct PlanRequest {
  std::filesystem::path scenario;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;  // falls back to the config's "out"
  std::optional<std::uint64_t> seed;         // swarm seed, overrides scenario and config
  std::optional<BaselineKind> baseline;
  bool dump_zones = false;      // <out>.zones.json
  bool pso_trace = false;       // <out>.pso_trace.csv
  bool dump_pool = false;       // <out>.pool.json
  bool validation_csv = false;  // <out>.validation.csv
};

/// Plans (or runs a baseline on) one scenario and writes the results JSON.
int cmd_plan(const PlanRequest& request, std::ostream& log);

struct SweepRequest {
  ScenarioKind kind = ScenarioKind::A;
  std::optional<std::filesystem::path> config;
  std::size_t runs = 30;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir;
  std::vector<std::size_t> variants;  // empty: all
};

/// Runs the experiment and writes runs.csv, summary.csv and the plot CSVs
/// `<kind>_uav_count.csv` and `<kind>_throughput.csv` into out_dir.
int cmd_sweep(const SweepRequest& request, std::ostream& log);

/// `<out>` with `suffix` appended to its file name.
std::filesystem::path sibling_path(const std::filesystem::path& out, const std::string& suffix);

}  // namespace uavplan
