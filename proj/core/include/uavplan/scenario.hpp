#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavplan/channel.hpp"
#include "uavplan/model.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/positioning.hpp"

namespace uavplan {

/// 802.11ac single-stream rates for MCS 0..5, bit/s.
struct MCSTable {
  static constexpr std::array<double, 6> rates_bps{6.5e6, 13e6, 19.5e6, 26e6, 39e6, 52e6};
  static double rate(std::size_t mcs_index);
};

/// A: demand sweep over the MCS table. B: venue-size sweep. C: UE-count sweep.
enum class ScenarioKind { A, B, C };

std::string_view to_string(ScenarioKind kind);
/// Accepts "A"/"B"/"C" in either case. Throws std::invalid_argument otherwise.
ScenarioKind parse_scenario_kind(std::string_view text);

std::size_t variant_count(ScenarioKind kind);
/// The swept quantity for a variant: demand in bit/s (A), venue side in m (B),
/// UE count (C).
double variant_value(ScenarioKind kind, std::size_t variant);
/// Column name for variant_value.
std::string_view variant_axis(ScenarioKind kind);

inline constexpr double kVenueAltitudeMin = 10.0;
inline constexpr double kVenueAltitudeMax = 120.0;

/// UEs drawn uniformly over the venue footprint at ground level.
/// Throws std::invalid_argument for an out-of-range variant.
Scenario generate_scenario(ScenarioKind kind, std::size_t variant, std::uint64_t seed);

/// Planner-policy settings that override what a scenario carries.
struct PolicyOverrides {
  std::optional<BandwidthPolicy> bandwidth;
  std::optional<double> b_max_hz;
  std::optional<double> z_min;
  std::optional<double> z_max;

  void apply(Scenario& scenario) const;
  friend bool operator==(const PolicyOverrides&, const PolicyOverrides&) = default;
};

enum class BaselineKind { fixed_altitude, fixed_group_size };

std::string_view to_string(BaselineKind kind);
/// Accepts "fixed-altitude" and "fixed-n" (and the underscore spellings).
BaselineKind parse_baseline_kind(std::string_view text);

struct BaselineOptions {
  double altitude_m = 20.0;
  std::size_t group_size = 10;
  std::size_t refinement_rounds = 50;
};

/// Partitions UEs into ceil(N / group_size) groups whose sizes differ by at
/// most one: seeded farthest-weighted centroid init, then balanced
/// nearest-centroid rounds. Groups are sorted by member list.
std::vector<std::vector<std::size_t>> balanced_groups(const Scenario& scenario, std::size_t group_count,
                                                      std::size_t rounds);

/// Comparison planners. fixed_altitude keeps the groups of `emtad` (planned
/// here when null) and re-runs PSO pinned at the baseline altitude;
/// fixed_group_size clusters UEs into groups of about ten and runs PSO over the
/// whole box. Constraint violations are left in place for the validator.
Deployment run_baseline(BaselineKind kind, const Scenario& scenario, const ChannelParams& params,
                        const SwarmConfig& config, const PlanResult* emtad = nullptr,
                        const BaselineOptions& options = {});

struct ThroughputReport {
  double aggregate_bps = 0.0;
  std::vector<double> per_ue_bps;
  double demand_satisfied_ratio = 0.0;  // aggregate / total demand
};

/// Delivered rate per UE, min(demand, rate), with each UAV's link bandwidths
/// scaled down proportionally when they exceed the per-UAV budget.
ThroughputReport evaluate_throughput(const Deployment& deployment, const Scenario& scenario,
                                     const ChannelParams& params);

enum class Method { emtad, fixed_altitude, fixed_group_size };
std::string_view to_string(Method method);
inline constexpr std::array<Method, 3> kAllMethods{Method::emtad, Method::fixed_altitude, Method::fixed_group_size};

struct ExperimentRow {
  ScenarioKind scenario = ScenarioKind::A;
  std::size_t variant = 0;
  Method method = Method::emtad;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t uav_count = 0;
  double aggregate_bps = 0.0;
  double demand_satisfied_ratio = 0.0;
  std::string status = "ok";

  [[nodiscard]] bool ok() const { return status == "ok"; }
};

struct SummaryRow {
  ScenarioKind scenario = ScenarioKind::A;
  std::size_t variant = 0;
  Method method = Method::emtad;
  std::size_t runs_ok = 0;
  double uav_count_mean = 0.0;
  double uav_count_std = 0.0;
  double aggregate_bps_mean = 0.0;
  double aggregate_bps_std = 0.0;
  double demand_satisfied_ratio_mean = 0.0;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;  // ordered by variant, run, method

  [[nodiscard]] std::vector<SummaryRow> summary() const;
  [[nodiscard]] std::vector<const ExperimentRow*> select(std::size_t variant, Method method) const;
  [[nodiscard]] bool all_failed() const;
};

struct ExperimentOptions {
  PolicyOverrides policy;
  std::vector<std::size_t> variants;  // empty: every variant
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
};

/// For each variant and run r in 1..runs, generates the scenario with seed
/// base_seed + r and evaluates every method. Failures become row statuses.
ExperimentTable run_experiment(ScenarioKind kind, const ChannelParams& params, const SwarmConfig& config,
                               std::size_t runs, std::uint64_t base_seed, const ExperimentOptions& options = {});

/// Shortest decimal that round-trips the double.
std::string format_number(double value);

void write_runs_csv(std::ostream& out, const ExperimentTable& table);
void write_summary_csv(std::ostream& out, const ExperimentTable& table);
/// One row per variant: the swept value then mean/std per method.
/// `metric` is "uav_count" or "throughput".
void write_plot_csv(std::ostream& out, const ExperimentTable& table, ScenarioKind kind, std::string_view metric);

}  // namespace uavplan
