#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uavplan/commands.hpp"
#include "uavplan/io.hpp"

using namespace uavplan;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("uavplan_test_" + std::to_string(counter()++) + "_" +
                                         ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] fs::path operator/(const std::string& name) const { return path_ / name; }
  [[nodiscard]] const fs::path& path() const { return path_; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path path_;
};

json minimal_scenario() {
  return json::parse(R"({
    "label": "t", "seed": 3,
    "venue": {"x": [0, 100], "y": [0, 100], "z_uav": [10, 120]},
    "b_max_hz": 160e6,
    "ues": [{"x": 10, "y": 20, "demand_bps": 6.5e6}, {"x": 60, "y": 70, "z": 0, "demand_bps": 13e6, "bandwidth_hz": 20e6}]
  })");
}

std::string where_of(const json& doc) {
  try {
    parse_scenario_document(doc);
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "<no error>";
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

}  // namespace

TEST(ScenarioJson, MinimalDocumentGetsDefaults) {
  const auto doc = parse_scenario_document(minimal_scenario());
  EXPECT_EQ(doc.scenario.size(), 2u);
  EXPECT_EQ(doc.scenario.ues[0].bandwidth_hz, 20e6);
  EXPECT_EQ(doc.scenario.bandwidth_policy, BandwidthPolicy::demand_fit);
  EXPECT_EQ(doc.channel, ChannelParams{});
  EXPECT_EQ(doc.pso, SwarmConfig{});
}

TEST(ScenarioJson, RoundTripIsLossless) {
  for (auto kind : {ScenarioKind::A, ScenarioKind::B, ScenarioKind::C}) {
    ScenarioDocument doc;
    doc.scenario = generate_scenario(kind, 2, 77);
    doc.channel.mu_nlos = 31.6;
    doc.pso.seed = 99;
    const auto back = parse_scenario_document(parse_json_text(dump_json(scenario_to_json(doc))));
    EXPECT_EQ(back, doc);
  }
}

TEST(ScenarioJson, UnknownKeysRejectedWithPath) {
  auto doc = minimal_scenario();
  doc["extra"] = 1;
  EXPECT_EQ(where_of(doc), "extra");
  doc = minimal_scenario();
  doc["ues"][1]["demand"] = 1;
  EXPECT_EQ(where_of(doc), "ues[1].demand");
  doc = minimal_scenario();
  doc["channel"] = {{"tx_power_mw", 100}};
  EXPECT_EQ(where_of(doc), "channel.tx_power_mw");
  doc = minimal_scenario();
  doc["venue"]["z"] = {0, 1};
  EXPECT_EQ(where_of(doc), "venue.z");
}

TEST(ScenarioJson, TypeAndValueErrors) {
  auto doc = minimal_scenario();
  doc["ues"][0]["x"] = "ten";
  EXPECT_EQ(where_of(doc), "ues[0].x");
  doc = minimal_scenario();
  doc.erase("venue");
  EXPECT_EQ(where_of(doc), "venue");
  doc = minimal_scenario();
  doc["venue"]["x"] = {0};
  EXPECT_EQ(where_of(doc), "venue.x");
  doc = minimal_scenario();
  doc["policy"] = {{"bandwidth", "greedy"}};
  EXPECT_EQ(where_of(doc), "policy.bandwidth");
  doc = minimal_scenario();
  doc["pso"] = {{"particle_count", -3}};
  EXPECT_EQ(where_of(doc), "pso.particle_count");
  doc = minimal_scenario();
  doc["ues"][0]["x"] = 500;  // outside the footprint
  EXPECT_THROW(parse_scenario_document(doc), ConfigError);
}

TEST(ChannelJson, DecibelSpellings) {
  const auto p = parse_channel(json{{"tx_power_dbm", 23.0},
                                    {"noise_floor_dbm", -90.0},
                                    {"noise_bandwidth_hz", 40e6},
                                    {"mu_los_db", 2.0},
                                    {"tx_antenna_gain_dbi", 3.0}},
                               {});
  EXPECT_DOUBLE_EQ(p.tx_power_w, dbm_to_watt(23.0));
  EXPECT_DOUBLE_EQ(p.noise_spectral_density, dbm_to_watt(-90.0) / 40e6);
  EXPECT_DOUBLE_EQ(p.mu_los, db_to_linear(2.0));
  EXPECT_DOUBLE_EQ(p.tx_antenna_gain, db_to_linear(3.0));
  EXPECT_THROW(parse_channel(json{{"tx_power_dbm", 23.0}, {"tx_power_w", 0.2}}, {}), ConfigError);
  EXPECT_THROW(parse_channel(json{{"noise_bandwidth_hz", 1e6}}, {}), ConfigError);
  EXPECT_THROW(parse_channel(json{{"los_threshold", 1.5}}, {}), ConfigError);
}

TEST(RunConfigJson, OverlaysScenario) {
  auto doc = parse_scenario_document(minimal_scenario());
  const auto config = parse_run_config(json::parse(R"({
    "channel": {"c1": 10.0}, "pso": {"particle_count": 12},
    "policy": {"bandwidth": "fixed", "b_max_hz": 80e6, "z_uav": [15, 100]}, "seed": 5, "out": "x.json"})"));
  apply_run_config(config, doc);
  EXPECT_EQ(doc.channel.c1, 10.0);
  EXPECT_EQ(doc.channel.c2, 0.28);
  EXPECT_EQ(doc.pso.particle_count, 12u);
  EXPECT_EQ(doc.pso.seed, 5u);
  EXPECT_EQ(doc.scenario.bandwidth_policy, BandwidthPolicy::fixed);
  EXPECT_EQ(doc.scenario.b_max_hz, 80e6);
  EXPECT_EQ(doc.scenario.venue.z_min, 15.0);
  EXPECT_EQ(*config.out, "x.json");
  EXPECT_THROW(parse_run_config(json{{"policy", {{"z_uav", {50, 10}}}}}), ConfigError);
  EXPECT_THROW(parse_run_config(json{{"outputs", "x"}}), ConfigError);
}

TEST(JsonText, SyntaxErrorReportsLine) {
  try {
    parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where().rfind("line 3,", 0), 0u) << e.where();
  }
}

TEST(Commands, GeneratePlanRoundTripAndDeterminism) {
  TempDir dir;
  std::ostringstream log;
  ASSERT_EQ(cmd_generate(ScenarioKind::B, 0, 4, dir / "s.json", log), kExitOk);
  const auto doc = read_scenario_file(dir / "s.json");
  EXPECT_EQ(doc.scenario, generate_scenario(ScenarioKind::B, 0, 4));

  PlanRequest req;
  req.scenario = dir / "s.json";
  req.out = dir / "r1.json";
  req.dump_zones = req.dump_pool = req.pso_trace = req.validation_csv = true;
  ASSERT_EQ(cmd_plan(req, log), kExitOk) << log.str();
  req.out = dir / "r2.json";
  ASSERT_EQ(cmd_plan(req, log), kExitOk);
  EXPECT_EQ(slurp(dir / "r1.json"), slurp(dir / "r2.json"));
  EXPECT_EQ(slurp(dir / "r1.json.pso_trace.csv"), slurp(dir / "r2.json.pso_trace.csv"));

  const auto results = json::parse(slurp(dir / "r1.json"));
  EXPECT_EQ(results["uav_count"], 1);
  EXPECT_EQ(results["assoc"].size(), 20u);
  EXPECT_TRUE(results["validation"]["passed"].get<bool>());
  for (const char* key : {"positions", "aggregate_bps"}) EXPECT_TRUE(results.contains(key));
  EXPECT_TRUE(fs::exists(dir / "r1.json.zones.json"));
  EXPECT_TRUE(fs::exists(dir / "r1.json.pool.json"));
  EXPECT_TRUE(fs::exists(dir / "r1.json.validation.csv"));
}

TEST(Commands, BaselinesAndExitCodes) {
  TempDir dir;
  std::ostringstream log;
  ASSERT_EQ(cmd_generate(ScenarioKind::C, 1, 2, dir / "c.json", log), kExitOk);
  PlanRequest req;
  req.scenario = dir / "c.json";
  req.out = dir / "n.json";
  req.baseline = BaselineKind::fixed_group_size;
  ASSERT_EQ(cmd_plan(req, log), kExitOk);
  EXPECT_EQ(json::parse(slurp(dir / "n.json"))["uav_count"], 3);

  req.baseline = BaselineKind::fixed_altitude;
  req.out = dir / "a.json";
  ASSERT_EQ(cmd_plan(req, log), kExitOk);
  for (const auto& p : json::parse(slurp(dir / "a.json"))["positions"]) EXPECT_EQ(p["z"], 20.0);

  req = {};
  req.scenario = dir / "missing.json";
  req.out = dir / "x.json";
  EXPECT_EQ(cmd_plan(req, log), kExitIo);

  write_text_file(dir / "bad.json", "{\"label\": ");
  req.scenario = dir / "bad.json";
  log.str("");
  EXPECT_EQ(cmd_plan(req, log), kExitConfig);
  EXPECT_NE(log.str().find("bad.json"), std::string::npos);

  auto unservable = minimal_scenario();
  unservable["ues"][0]["demand_bps"] = 5e9;
  write_text_file(dir / "u.json", dump_json(unservable));
  req.scenario = dir / "u.json";
  EXPECT_EQ(cmd_plan(req, log), kExitUnservable);

  req.scenario = dir / "c.json";
  req.out = dir / "no_such_dir" / "r.json";
  EXPECT_EQ(cmd_plan(req, log), kExitIo);

  req.out.reset();
  EXPECT_EQ(cmd_plan(req, log), kExitConfig);
}

TEST(Commands, SweepWritesTablesAndAllFailedExit) {
  TempDir dir;
  std::ostringstream log;
  SweepRequest req;
  req.kind = ScenarioKind::B;
  req.runs = 1;
  req.variants = {0};
  req.out_dir = dir / "out";
  ASSERT_EQ(cmd_sweep(req, log), kExitOk) << log.str();
  for (const char* f : {"runs.csv", "summary.csv", "B_uav_count.csv", "B_throughput.csv"}) {
    EXPECT_TRUE(fs::exists(req.out_dir / f)) << f;
  }
  const auto runs = slurp(req.out_dir / "runs.csv");
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 4);

  write_text_file(dir / "cfg.json", R"({"policy": {"z_uav": [-5, -1]}})");
  req.kind = ScenarioKind::A;
  req.variants = {5};
  req.config = dir / "cfg.json";
  req.out_dir = dir / "fail";
  EXPECT_EQ(cmd_sweep(req, log), kExitAllRunsFailed) << log.str();

  req.variants = {9};
  EXPECT_EQ(cmd_sweep(req, log), kExitConfig);
}

#ifdef UAVPLAN_CLI_PATH
TEST(Binary, ExitCodesThroughTheShell) {
  TempDir dir;
  const std::string cli = UAVPLAN_CLI_PATH;
  auto run = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + " 2>/dev/null").c_str());
    return WEXITSTATUS(status);
  };
  const std::string s = (dir / "s.json").string();
  EXPECT_EQ(run("generate --scenario A --variant 0 --seed 1 --out " + s), 0);
  EXPECT_EQ(run("plan --scenario " + s + " --out " + (dir / "r.json").string()), 0);
  EXPECT_EQ(run("plan --scenario " + (dir / "nope.json").string() + " --out x"), 2);
  EXPECT_EQ(run("plan --bogus"), 4);
  EXPECT_EQ(run("generate --scenario Q --out " + s), 4);
  EXPECT_EQ(run("plan --scenario " + s + " --baseline sideways --out x"), 4);
}
#endif
