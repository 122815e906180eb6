#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "uavplan/channel.hpp"
#include "uavplan/model.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/positioning.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

/// Malformed or schema-invalid input. `where()` is a JSON path such as
/// `ues[3].demand_bps`, or `line 4, column 12` for syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message), where_(std::move(where)), message_(message) {}
  [[nodiscard]] const std::string& where() const { return where_; }
  [[nodiscard]] const std::string& message() const { return message_; }

 private:
  std::string where_;
  std::string message_;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scenario file: the scenario plus the channel and swarm sections.
struct ScenarioDocument {
  Scenario scenario;
  ChannelParams channel;
  SwarmConfig pso;

  friend bool operator==(const ScenarioDocument&, const ScenarioDocument&) = default;
};

/// Run configuration overlaid on a scenario document.
struct RunConfig {
  std::optional<nlohmann::json> channel;  // applied key by key over the scenario's section
  std::optional<nlohmann::json> pso;
  PolicyOverrides policy;
  std::optional<std::uint64_t> seed;  // swarm seed
  std::optional<std::string> out;
};

/// Applies the keys of `section` to `base`. Unknown keys, conflicting unit
/// spellings and invalid values raise ConfigError at `path`.
ChannelParams parse_channel(const nlohmann::json& section, ChannelParams base, const std::string& path = "channel");
SwarmConfig parse_swarm(const nlohmann::json& section, SwarmConfig base, const std::string& path = "pso");

ScenarioDocument parse_scenario_document(const nlohmann::json& doc);
RunConfig parse_run_config(const nlohmann::json& doc);

/// Overlays `config` on `doc`; the config wins.
void apply_run_config(const RunConfig& config, ScenarioDocument& doc);

nlohmann::json channel_to_json(const ChannelParams& params);
nlohmann::json swarm_to_json(const SwarmConfig& config);
nlohmann::json scenario_to_json(const ScenarioDocument& doc);

nlohmann::json validation_to_json(const ValidationReport& report);
/// Results document: uav_count, positions, assoc, aggregate_bps, validation.
nlohmann::json results_to_json(const Deployment& deployment, const ValidationReport& report);
nlohmann::json zones_to_json(const std::vector<CandidateZone>& zones);
nlohmann::json pool_to_json(const std::vector<Deployment>& pool, const Deployment& selected);

/// Parses JSON text; syntax errors become ConfigError with line and column.
nlohmann::json parse_json_text(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
/// Two-space indented JSON with a trailing newline.
std::string dump_json(const nlohmann::json& doc);

ScenarioDocument read_scenario_file(const std::filesystem::path& path);
RunConfig read_run_config(const std::filesystem::path& path);

}  // namespace uavplan
