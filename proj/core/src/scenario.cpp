#include "uavplan/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "uavplan/random.hpp"

namespace uavplan {

double MCSTable::rate(std::size_t mcs_index) {
  if (mcs_index >= rates_bps.size()) throw std::invalid_argument("MCS index out of range: " + std::to_string(mcs_index));
  return rates_bps[mcs_index];
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::A: return "A";
    case ScenarioKind::B: return "B";
    case ScenarioKind::C: return "C";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "A" || text == "a") return ScenarioKind::A;
  if (text == "B" || text == "b") return ScenarioKind::B;
  if (text == "C" || text == "c") return ScenarioKind::C;
  throw std::invalid_argument("unknown scenario kind '" + std::string(text) + "' (expected A, B or C)");
}

namespace {

constexpr std::array<double, 5> kVenueSides{100.0, 200.0, 300.0, 400.0, 500.0};
constexpr std::array<std::size_t, 5> kUeCounts{20, 30, 40, 50, 60};

}  // namespace

std::size_t variant_count(ScenarioKind kind) {
  return kind == ScenarioKind::A ? MCSTable::rates_bps.size() : kVenueSides.size();
}

double variant_value(ScenarioKind kind, std::size_t variant) {
  if (variant >= variant_count(kind)) {
    throw std::invalid_argument("variant " + std::to_string(variant) + " out of range for scenario " +
                                std::string(to_string(kind)));
  }
  switch (kind) {
    case ScenarioKind::A: return MCSTable::rates_bps[variant];
    case ScenarioKind::B: return kVenueSides[variant];
    case ScenarioKind::C: return static_cast<double>(kUeCounts[variant]);
  }
  return 0.0;
}

std::string_view variant_axis(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::A: return "demand_bps";
    case ScenarioKind::B: return "venue_side_m";
    case ScenarioKind::C: return "ue_count";
  }
  return "variant";
}

Scenario generate_scenario(ScenarioKind kind, std::size_t variant, std::uint64_t seed) {
  const double value = variant_value(kind, variant);
  const double side = kind == ScenarioKind::B ? value : 100.0;
  const std::size_t count = kind == ScenarioKind::C ? static_cast<std::size_t>(value) : 20;
  const double demand = kind == ScenarioKind::A ? value : MCSTable::rates_bps[0];

  Scenario scenario;
  scenario.label = std::string(to_string(kind)) + "-" + std::to_string(variant);
  scenario.seed = seed;
  scenario.venue = {0.0, side, 0.0, side, kVenueAltitudeMin, kVenueAltitudeMax};
  UniformStream rng(mix_seed(seed, static_cast<std::uint64_t>(kind)));
  scenario.ues.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    UserEquipment ue;
    ue.position.x = rng.next(0.0, side);
    ue.position.y = rng.next(0.0, side);
    ue.demand_bps = demand;
    scenario.ues.push_back(ue);
  }
  return scenario;
}

void PolicyOverrides::apply(Scenario& scenario) const {
  if (bandwidth) scenario.bandwidth_policy = *bandwidth;
  if (b_max_hz) scenario.b_max_hz = *b_max_hz;
  if (z_min) scenario.venue.z_min = *z_min;
  if (z_max) scenario.venue.z_max = *z_max;
}

std::string_view to_string(BaselineKind kind) {
  return kind == BaselineKind::fixed_altitude ? "fixed-altitude" : "fixed-n";
}

BaselineKind parse_baseline_kind(std::string_view text) {
  if (text == "fixed-altitude" || text == "fixed_altitude") return BaselineKind::fixed_altitude;
  if (text == "fixed-n" || text == "fixed_n" || text == "fixed-group-size" || text == "fixed_group_size") {
    return BaselineKind::fixed_group_size;
  }
  throw std::invalid_argument("unknown baseline '" + std::string(text) + "' (expected fixed-altitude or fixed-n)");
}

namespace {

double squared_ground_distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

std::vector<std::vector<std::size_t>> balanced_groups(const Scenario& scenario, std::size_t group_count,
                                                      std::size_t rounds) {
  const std::size_t n = scenario.size();
  group_count = std::clamp<std::size_t>(group_count, 1, std::max<std::size_t>(n, 1));
  if (n == 0) return {};

  UniformStream rng(mix_seed(scenario.seed, 0x66697865646eULL));
  std::vector<Point3> centers;
  centers.push_back(scenario.ues[rng.next_index(n)].position);
  while (centers.size() < group_count) {
    std::vector<double> weight(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best = std::min(best, squared_ground_distance(scenario.ues[i].position, c));
      weight[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = rng.next() * total;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (target < weight[i]) {
          pick = i;
          break;
        }
        target -= weight[i];
      }
    } else {
      pick = rng.next_index(n);
    }
    centers.push_back(scenario.ues[pick].position);
  }

  const std::size_t base = n / group_count;
  const std::size_t extra = n % group_count;
  std::vector<std::size_t> owner(n, 0);
  for (std::size_t round = 0; round < std::max<std::size_t>(rounds, 1); ++round) {
    // Closest pairs first; a group may hold `base` members, and up to `extra`
    // groups may hold one more.
    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> pairs;
    pairs.reserve(n * group_count);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t g = 0; g < group_count; ++g) {
        pairs.push_back({squared_ground_distance(scenario.ues[i].position, centers[g]), {i, g}});
      }
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::size_t> next(n, group_count);
    std::vector<std::size_t> size(group_count, 0);
    std::size_t oversized = 0;
    for (const auto& [d, ig] : pairs) {
      const auto [i, g] = ig;
      if (next[i] != group_count) continue;
      if (size[g] < base || (size[g] == base && oversized < extra)) {
        if (size[g] == base) ++oversized;
        ++size[g];
        next[i] = g;
      }
    }
    const bool stable = round > 0 && next == owner;
    owner = std::move(next);
    for (std::size_t g = 0; g < group_count; ++g) {
      Point3 sum;
      for (std::size_t i = 0; i < n; ++i) {
        if (owner[i] == g) sum = sum + scenario.ues[i].position;
      }
      if (size[g] > 0) centers[g] = (1.0 / static_cast<double>(size[g])) * sum;
    }
    if (stable) break;
  }

  std::vector<std::vector<std::size_t>> groups(group_count);
  for (std::size_t i = 0; i < n; ++i) groups[owner[i]].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  std::sort(groups.begin(), groups.end());
  return groups;
}

Deployment run_baseline(BaselineKind kind, const Scenario& scenario, const ChannelParams& params,
                        const SwarmConfig& config, const PlanResult* emtad, const BaselineOptions& options) {
  scenario.validate();
  params.validate();
  config.validate();
  const CoverageGeometry geometry = build_geometry(scenario, params, false);
  const std::uint64_t base = mix_seed(config.seed ^ scenario.seed, kind == BaselineKind::fixed_altitude ? 101 : 102);

  std::vector<std::vector<std::size_t>> groups;
  std::vector<CandidateZone> zones;
  PositionSearchOptions search;
  search.geometry = &geometry;

  if (kind == BaselineKind::fixed_altitude) {
    std::optional<PlanResult> planned;
    if (emtad == nullptr) {
      planned = plan_deployment(scenario, params, config);
      emtad = &*planned;
    }
    zones = emtad->groups;
    search.altitude = options.altitude_m;
    search.snap_to_zone = false;
  } else {
    const std::size_t size = std::max<std::size_t>(options.group_size, 1);
    const std::size_t count = (scenario.size() + size - 1) / size;
    for (auto& members : balanced_groups(scenario, count, options.refinement_rounds)) {
      const auto minimum = minimize_deficit(members, geometry, scenario.venue);
      zones.push_back(make_zone(std::move(members), minimum.point, geometry));
    }
  }

  std::vector<Point3> positions;
  for (std::size_t g = 0; g < zones.size(); ++g) {
    SwarmConfig local = config;
    local.seed = mix_seed(base, g);
    positions.push_back(search_position(zones[g], scenario, params, local, search).uav_position);
    groups.push_back(zones[g].members);
  }
  return make_deployment(groups, positions, scenario, params);
}

ThroughputReport evaluate_throughput(const Deployment& deployment, const Scenario& scenario,
                                     const ChannelParams& params) {
  ThroughputReport report;
  report.per_ue_bps.assign(scenario.size(), 0.0);
  const std::size_t k = deployment.uav_positions.size();
  std::vector<double> load(k, 0.0);
  for (const auto& link : deployment.links) {
    if (link.uav < k) load[link.uav] += link.bandwidth_hz;
  }
  for (const auto& link : deployment.links) {
    if (link.uav >= k || link.ue >= scenario.size()) continue;
    double bandwidth = link.bandwidth_hz;
    if (load[link.uav] > scenario.b_max_hz) bandwidth *= scenario.b_max_hz / load[link.uav];
    double rate = 0.0;
    try {
      rate = served_rate(scenario, link.ue, deployment.uav_positions[link.uav], bandwidth, params);
    } catch (const std::exception&) {
      rate = 0.0;
    }
    report.per_ue_bps[link.ue] = std::max(report.per_ue_bps[link.ue], std::min(rate, scenario.ues[link.ue].demand_bps));
  }
  double demand = 0.0;
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    report.aggregate_bps += report.per_ue_bps[i];
    demand += scenario.ues[i].demand_bps;
  }
  report.demand_satisfied_ratio = demand > 0.0 ? report.aggregate_bps / demand : 0.0;
  return report;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::emtad: return "emtad";
    case Method::fixed_altitude: return "fixed_altitude";
    case Method::fixed_group_size: return "fixed_group_size";
  }
  return "?";
}

namespace {

std::string status_of(const std::exception& e) {
  if (dynamic_cast<const UnservableError*>(&e)) return "unservable";
  if (dynamic_cast<const CapacityDeadlockError*>(&e)) return "capacity_deadlock";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_input";
  return "error";
}

void fill(ExperimentRow& row, const Deployment& deployment, const Scenario& scenario, const ChannelParams& params) {
  const auto throughput = evaluate_throughput(deployment, scenario, params);
  row.uav_count = deployment.uav_count;
  row.aggregate_bps = throughput.aggregate_bps;
  row.demand_satisfied_ratio = throughput.demand_satisfied_ratio;
}

}  // namespace

ExperimentTable run_experiment(ScenarioKind kind, const ChannelParams& params, const SwarmConfig& config,
                               std::size_t runs, std::uint64_t base_seed, const ExperimentOptions& options) {
  if (runs == 0) throw std::invalid_argument("runs must be >= 1");
  std::vector<std::size_t> variants = options.variants;
  if (variants.empty()) {
    for (std::size_t v = 0; v < variant_count(kind); ++v) variants.push_back(v);
  }

  ExperimentTable table;
  for (auto variant : variants) {
    for (std::size_t run = 1; run <= runs; ++run) {
      const std::uint64_t seed = base_seed + run;
      Scenario scenario = generate_scenario(kind, variant, seed);
      options.policy.apply(scenario);

      std::optional<PlanResult> plan;
      std::string plan_status;
      try {
        plan = plan_deployment(scenario, params, config);
      } catch (const std::exception& e) {
        plan_status = status_of(e);
      }

      for (auto method : options.methods) {
        ExperimentRow row{kind, variant, method, run, seed};
        if (!plan && method != Method::fixed_group_size) {
          row.status = plan_status;
          table.rows.push_back(std::move(row));
          continue;
        }
        try {
          switch (method) {
            case Method::emtad:
              fill(row, plan->deployment, scenario, params);
              break;
            case Method::fixed_altitude:
              fill(row, run_baseline(BaselineKind::fixed_altitude, scenario, params, config, &*plan), scenario,
                   params);
              break;
            case Method::fixed_group_size:
              fill(row, run_baseline(BaselineKind::fixed_group_size, scenario, params, config), scenario, params);
              break;
          }
        } catch (const std::exception& e) {
          row.status = status_of(e);
        }
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

std::vector<const ExperimentRow*> ExperimentTable::select(std::size_t variant, Method method) const {
  std::vector<const ExperimentRow*> out;
  for (const auto& row : rows) {
    if (row.variant == variant && row.method == method) out.push_back(&row);
  }
  return out;
}

bool ExperimentTable::all_failed() const {
  return std::none_of(rows.begin(), rows.end(), [](const ExperimentRow& r) { return r.ok(); });
}

namespace {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

// Sample standard deviation; zero for a single value.
Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

}  // namespace

std::vector<SummaryRow> ExperimentTable::summary() const {
  std::vector<std::pair<std::size_t, Method>> cells;
  for (const auto& row : rows) {
    const std::pair<std::size_t, Method> cell{row.variant, row.method};
    if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
  }
  std::vector<SummaryRow> out;
  for (const auto& [variant, method] : cells) {
    SummaryRow s;
    s.variant = variant;
    s.method = method;
    std::vector<double> counts, throughput, ratio;
    for (const auto* row : select(variant, method)) {
      s.scenario = row->scenario;
      if (!row->ok()) continue;
      counts.push_back(static_cast<double>(row->uav_count));
      throughput.push_back(row->aggregate_bps);
      ratio.push_back(row->demand_satisfied_ratio);
    }
    s.runs_ok = counts.size();
    const auto c = moments(counts);
    const auto t = moments(throughput);
    s.uav_count_mean = c.mean;
    s.uav_count_std = c.std;
    s.aggregate_bps_mean = t.mean;
    s.aggregate_bps_std = t.std;
    s.demand_satisfied_ratio_mean = moments(ratio).mean;
    out.push_back(s);
  }
  return out;
}

std::string format_number(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

void write_runs_csv(std::ostream& out, const ExperimentTable& table) {
  out << "scenario,variant,method,run,seed,uav_count,aggregate_bps,demand_satisfied_ratio,status\n";
  for (const auto& r : table.rows) {
    out << to_string(r.scenario) << ',' << r.variant << ',' << to_string(r.method) << ',' << r.run << ',' << r.seed
        << ',' << r.uav_count << ',' << format_number(r.aggregate_bps) << ',' << format_number(r.demand_satisfied_ratio)
        << ',' << r.status << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ExperimentTable& table) {
  out << "scenario,variant,method,runs_ok,uav_count_mean,uav_count_std,aggregate_bps_mean,aggregate_bps_std,"
         "demand_satisfied_ratio_mean\n";
  for (const auto& s : table.summary()) {
    out << to_string(s.scenario) << ',' << s.variant << ',' << to_string(s.method) << ',' << s.runs_ok << ','
        << format_number(s.uav_count_mean) << ',' << format_number(s.uav_count_std) << ','
        << format_number(s.aggregate_bps_mean) << ',' << format_number(s.aggregate_bps_std) << ','
        << format_number(s.demand_satisfied_ratio_mean) << '\n';
  }
}

void write_plot_csv(std::ostream& out, const ExperimentTable& table, ScenarioKind kind, std::string_view metric) {
  const bool counts = metric == "uav_count";
  if (!counts && metric != "throughput") throw std::invalid_argument("unknown plot metric '" + std::string(metric) + "'");
  const auto summary = table.summary();
  std::vector<Method> methods;
  std::vector<std::size_t> variants;
  for (const auto& s : summary) {
    if (std::find(methods.begin(), methods.end(), s.method) == methods.end()) methods.push_back(s.method);
    if (std::find(variants.begin(), variants.end(), s.variant) == variants.end()) variants.push_back(s.variant);
  }
  const std::string suffix = counts ? "" : "_bps";
  out << variant_axis(kind);
  for (auto m : methods) out << ',' << to_string(m) << "_mean" << suffix << ',' << to_string(m) << "_std" << suffix;
  out << '\n';
  for (auto v : variants) {
    out << format_number(variant_value(kind, v));
    for (auto m : methods) {
      const auto it = std::find_if(summary.begin(), summary.end(),
                                   [&](const SummaryRow& s) { return s.variant == v && s.method == m; });
      const double mean = counts ? it->uav_count_mean : it->aggregate_bps_mean;
      const double sd = counts ? it->uav_count_std : it->aggregate_bps_std;
      out << ',' << format_number(mean) << ',' << format_number(sd);
    }
    out << '\n';
  }
}

}  // namespace uavplan
