#include "uavplan/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <ostream>
#include <utility>

#include "uavplan/random.hpp"

namespace uavplan {

Deployment make_deployment(const std::vector<std::vector<std::size_t>>& groups, const std::vector<Point3>& positions,
                           const Scenario& scenario, const ChannelParams& params) {
  const std::size_t n = scenario.size();
  const std::size_t k = positions.size();
  Deployment out;
  out.uav_positions = positions;
  out.uav_count = k;
  out.association.z.assign(n, std::vector<int>(k, 0));
  out.association.a.assign(k, 1);
  std::vector<std::size_t> owner(n, k);
  for (std::size_t g = 0; g < groups.size() && g < k; ++g) {
    for (auto ue : groups[g]) {
      out.association.z[ue][g] = 1;
      owner[ue] = g;
    }
  }
  for (std::size_t ue = 0; ue < n; ++ue) {
    if (owner[ue] == k) continue;
    const Point3& uav = positions[owner[ue]];
    const double bandwidth = allocate_bandwidth(scenario, ue, uav, params);
    const double rate = served_rate(scenario, ue, uav, bandwidth, params);
    out.links.push_back({ue, owner[ue], bandwidth, rate});
    out.aggregate_throughput_bps += std::min(rate, scenario.ues[ue].demand_bps);
  }
  return out;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConstraintCheck& c) { return c.passed(); });
}

const ConstraintCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

void note(ConstraintCheck& check, double excess) {
  ++check.violations;
  check.residual = std::max(check.residual, excess);
}

int entry(const std::vector<std::vector<int>>& z, std::size_t i, std::size_t k) {
  if (i >= z.size() || k >= z[i].size()) return 0;
  return z[i][k];
}

}  // namespace

ValidationReport validate_deployment(const Deployment& deployment, const Scenario& scenario,
                                     const ChannelParams& params) {
  const std::size_t n = scenario.size();
  const std::size_t k = deployment.uav_positions.size();
  const auto& z = deployment.association.z;
  const auto& a = deployment.association.a;

  ConstraintCheck demand{"demand", 0.0, "bps", 0};
  ConstraintCheck capacity{"capacity", 0.0, "Hz", 0};
  ConstraintCheck unique{"unique_association", 0.0, "count", 0};
  ConstraintCheck linkage{"activation_linkage", 0.0, "count", 0};
  ConstraintCheck binary_z{"binary_association", 0.0, "count", 0};
  ConstraintCheck binary_a{"binary_activation", 0.0, "count", 0};
  ConstraintCheck count{"uav_count", 0.0, "count", 0};

  auto activation = [&](std::size_t uav) { return uav < a.size() ? a[uav] : 0; };

  // Link bandwidths keyed by (ue, uav); a duplicate link adds to the UAV's load.
  std::map<std::pair<std::size_t, std::size_t>, double> bandwidth;
  std::vector<double> load(k, 0.0);
  for (const auto& link : deployment.links) {
    bandwidth[{link.ue, link.uav}] += link.bandwidth_hz;
    if (link.uav < k) load[link.uav] += link.bandwidth_hz;
  }

  for (std::size_t i = 0; i < n; ++i) {
    long total = 0;
    for (std::size_t u = 0; u < k; ++u) {
      const int v = entry(z, i, u);
      total += v;
      if (v != 0 && v != 1) note(binary_z, 1.0);
      if (v > activation(u)) note(linkage, static_cast<double>(v - activation(u)));
      if (v == 0) continue;

      const double demand_bps = scenario.ues[i].demand_bps;
      double rate = 0.0;
      const auto it = bandwidth.find({i, u});
      if (it != bandwidth.end()) {
        try {
          rate = link_rate(scenario.ues[i].position, deployment.uav_positions[u], it->second, params);
        } catch (const std::exception&) {
          rate = 0.0;
        }
        if (!std::isfinite(rate)) rate = 0.0;
      }
      if (rate < demand_bps * (1.0 - kRateTolerance)) note(demand, demand_bps - rate);
    }
    if (total != 1) note(unique, std::abs(static_cast<double>(total - 1)));
  }

  for (std::size_t u = 0; u < k; ++u) {
    if (load[u] > scenario.b_max_hz) note(capacity, load[u] - scenario.b_max_hz);
  }
  for (std::size_t u = 0; u < a.size(); ++u) {
    if (a[u] != 0 && a[u] != 1) note(binary_a, 1.0);
  }
  for (const auto& link : deployment.links) {
    if (link.ue >= n || link.uav >= k || entry(z, link.ue, link.uav) == 0) note(unique, 1.0);
  }

  long active = 0;
  for (auto v : a) active += v;
  const double count_gap = std::max(std::abs(static_cast<double>(deployment.uav_count) - static_cast<double>(k)),
                                    std::abs(static_cast<double>(active) - static_cast<double>(k)));
  if (count_gap > 0.0 || a.size() != k) note(count, std::max(count_gap, 1.0));

  ValidationReport report;
  report.checks = {demand, capacity, unique, linkage, binary_z, binary_a, count};
  return report;
}

void write_validation_csv(std::ostream& out, const ValidationReport& report) {
  out << "constraint,residual,unit,violations,passed\n";
  for (const auto& c : report.checks) {
    out << c.name << ',' << c.residual << ',' << c.unit << ',' << c.violations << ',' << (c.passed() ? 1 : 0) << '\n';
  }
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 principal_axis(std::span<const std::size_t> members, const Scenario& scenario) {
  Vec3 mean{};
  for (auto m : members) {
    for (int r = 0; r < 3; ++r) mean[r] += scenario.ues[m].position[r];
  }
  for (auto& v : mean) v /= static_cast<double>(members.size());
  std::array<Vec3, 3> cov{};
  for (auto m : members) {
    const auto& p = scenario.ues[m].position;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) cov[r][c] += (p[r] - mean[r]) * (p[c] - mean[c]);
    }
  }
  // Power iteration from the heaviest column.
  int start = 0;
  double best = -1.0;
  for (int c = 0; c < 3; ++c) {
    const double norm = cov[0][c] * cov[0][c] + cov[1][c] * cov[1][c] + cov[2][c] * cov[2][c];
    if (norm > best) {
      best = norm;
      start = c;
    }
  }
  if (!(best > 0.0)) return {1.0, 0.0, 0.0};
  Vec3 v{cov[0][start], cov[1][start], cov[2][start]};
  for (int it = 0; it < 100; ++it) {
    Vec3 w{};
    for (int r = 0; r < 3; ++r) w[r] = cov[r][0] * v[0] + cov[r][1] * v[1] + cov[r][2] * v[2];
    const double norm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (!(norm > 0.0)) break;
    for (int r = 0; r < 3; ++r) v[r] = w[r] / norm;
  }
  return v;
}

void bisect(std::vector<std::size_t> members, std::size_t parts, const Scenario& scenario,
            std::vector<std::vector<std::size_t>>& out) {
  if (parts <= 1 || members.size() <= 1) {
    out.push_back(std::move(members));
    return;
  }
  const Vec3 axis = principal_axis(members, scenario);
  auto key = [&](std::size_t m) {
    const auto& p = scenario.ues[m].position;
    return axis[0] * p.x + axis[1] * p.y + axis[2] * p.z;
  };
  std::stable_sort(members.begin(), members.end(), [&](std::size_t l, std::size_t r) {
    const double kl = key(l);
    const double kr = key(r);
    return kl != kr ? kl < kr : l < r;
  });
  const std::size_t left_parts = (parts + 1) / 2;
  const std::size_t left_size = (members.size() * left_parts + parts - 1) / parts;
  std::vector<std::size_t> left(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(left_size));
  std::vector<std::size_t> right(members.begin() + static_cast<std::ptrdiff_t>(left_size), members.end());
  bisect(std::move(left), left_parts, scenario, out);
  bisect(std::move(right), parts - left_parts, scenario, out);
}

}  // namespace

std::vector<CandidateZone> split_zone(const CandidateZone& zone, const Scenario& scenario, std::size_t n_max,
                                      const CoverageGeometry& geometry) {
  if (n_max == 0) n_max = 1;
  if (zone.members.size() <= n_max) return {zone};
  const std::size_t parts = (zone.members.size() + n_max - 1) / n_max;
  std::vector<std::vector<std::size_t>> pieces;
  bisect(zone.members, parts, scenario, pieces);

  auto certify = [&](std::vector<std::size_t> members) -> std::optional<CandidateZone> {
    const auto minimum = minimize_deficit(members, geometry, scenario.venue);
    if (minimum.feasible()) return make_zone(std::move(members), minimum.point, geometry);
    if (max_deficit(zone.witness, members, geometry) <= 0.0) return make_zone(std::move(members), zone.witness, geometry);
    return std::nullopt;
  };

  std::vector<CandidateZone> out;
  for (auto& piece : pieces) {
    if (auto sub = certify(piece)) {
      out.push_back(std::move(*sub));
      continue;
    }
    for (auto m : piece) {
      auto single = certify({m});
      out.push_back(single ? std::move(*single) : make_zone({m}, zone.witness, geometry));
    }
  }
  return out;
}

double bandwidth_floor(const Scenario& scenario, std::size_t ue, const ChannelParams& params) {
  const auto& user = scenario.ues[ue];
  if (scenario.bandwidth_policy == BandwidthPolicy::fixed) return user.bandwidth_hz;
  const Point3 overhead{user.position.x, user.position.y, scenario.venue.z_min};
  return allocate_bandwidth(scenario, ue, overhead, params);
}

namespace {

std::vector<std::size_t> caps_from_floors(std::span<const CandidateZone> zones, const std::vector<double>& floors,
                                          double b_max_hz) {
  std::vector<std::size_t> caps;
  caps.reserve(zones.size());
  for (const auto& zone : zones) {
    std::vector<double> bandwidths;
    for (auto m : zone.members) bandwidths.push_back(floors[m]);
    caps.push_back(std::min(zone.members.size(), max_ues_per_uav(std::move(bandwidths), b_max_hz)));
  }
  return caps;
}

struct Placement {
  CandidateZone group;
  PlacementSolution solution;
};

struct Candidate {
  Deployment deployment;
  std::vector<CandidateZone> groups;
  std::vector<std::vector<TracePoint>> traces;
};

Candidate place_cover(const std::vector<CandidateZone>& cover, std::uint64_t seed, const Scenario& scenario,
                      const ChannelParams& params, const SwarmConfig& config, const CoverageGeometry& geometry,
                      bool record_traces) {
  PositionSearchOptions search;
  search.geometry = &geometry;
  search.record_trace = record_traces;

  std::deque<CandidateZone> work(cover.begin(), cover.end());
  std::vector<Placement> placed;
  std::uint64_t counter = 0;
  while (!work.empty()) {
    CandidateZone group = std::move(work.front());
    work.pop_front();
    SwarmConfig local = config;
    local.seed = mix_seed(seed, counter++);
    PlacementSolution solution = search_position(group, scenario, params, local, search);
    if (solution.feasible) {
      placed.push_back({std::move(group), std::move(solution)});
      continue;
    }
    if (group.members.size() == 1) {
      throw CapacityDeadlockError("UE " + std::to_string(group.members.front()) +
                                  " cannot be served within the per-UAV bandwidth budget");
    }
    std::vector<double> fitted;
    for (auto m : group.members) fitted.push_back(allocate_bandwidth(scenario, m, solution.uav_position, params));
    const std::size_t n_max =
        std::clamp<std::size_t>(max_ues_per_uav(fitted, scenario.b_max_hz), 1, group.members.size() - 1);
    auto pieces = split_zone(group, scenario, n_max, geometry);
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) work.push_front(std::move(*it));
  }

  std::sort(placed.begin(), placed.end(),
            [](const Placement& l, const Placement& r) { return l.group.members < r.group.members; });
  Candidate out;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<Point3> positions;
  for (auto& p : placed) {
    groups.push_back(p.group.members);
    positions.push_back(p.solution.uav_position);
    out.traces.push_back(std::move(p.solution.trace));
    out.groups.push_back(std::move(p.group));
  }
  out.deployment = make_deployment(groups, positions, scenario, params);
  return out;
}

// Fewer UAVs, then more throughput (1 bit/s window), then the smaller position list.
bool better(const Deployment& l, const Deployment& r) {
  if (l.uav_count != r.uav_count) return l.uav_count < r.uav_count;
  if (std::abs(l.aggregate_throughput_bps - r.aggregate_throughput_bps) > 1.0) {
    return l.aggregate_throughput_bps > r.aggregate_throughput_bps;
  }
  return l.uav_positions < r.uav_positions;
}

}  // namespace

std::vector<std::size_t> zone_caps(std::span<const CandidateZone> zones, const Scenario& scenario,
                                   const ChannelParams& params) {
  std::vector<double> floors(scenario.size());
  for (std::size_t i = 0; i < scenario.size(); ++i) floors[i] = bandwidth_floor(scenario, i, params);
  return caps_from_floors(zones, floors, scenario.b_max_hz);
}

PlanResult plan_deployment(const Scenario& scenario, const ChannelParams& params, const SwarmConfig& config,
                           const PlanOptions& options) {
  scenario.validate();
  params.validate();
  config.validate();

  const CoverageGeometry geometry = build_geometry(scenario, params, false);
  const FeasibleBox& box = scenario.venue;

  std::vector<std::size_t> unservable;
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    const auto& sphere = geometry.spheres[i];
    const std::size_t single[] = {i};
    if (sphere.radius < box.z_min - sphere.center.z || !zone_witness(single, geometry, box)) unservable.push_back(i);
  }
  if (!unservable.empty()) throw UnservableError(std::move(unservable));

  std::vector<double> floors(scenario.size());
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    floors[i] = bandwidth_floor(scenario, i, params);
    if (floors[i] > scenario.b_max_hz) {
      throw CapacityDeadlockError("UE " + std::to_string(i) + " needs more bandwidth than one UAV provides");
    }
  }

  PlanResult result;
  result.zones = enumerate_zones(geometry, box, options.enumeration);
  const auto caps = caps_from_floors(result.zones, floors, scenario.b_max_hz);
  auto outcome = minimal_zone_cover(result.zones, geometry, caps, options.cover);
  result.exact_cover = outcome.exact;

  std::vector<std::vector<CandidateZone>> covers{std::move(outcome.groups)};
  if (outcome.greedy_groups && *outcome.greedy_groups != covers.front()) covers.push_back(std::move(*outcome.greedy_groups));

  const std::uint64_t base = config.seed ^ scenario.seed;
  std::optional<Candidate> best;
  for (std::size_t c = 0; c < covers.size(); ++c) {
    Candidate candidate =
        place_cover(covers[c], mix_seed(base, c), scenario, params, config, geometry, options.record_traces);
    result.pool.push_back(candidate.deployment);
    if (!best || better(candidate.deployment, best->deployment)) best = std::move(candidate);
  }

  result.deployment = std::move(best->deployment);
  result.groups = std::move(best->groups);
  result.traces = std::move(best->traces);
  result.validation = validate_deployment(result.deployment, scenario, params);
  if (!result.validation.passed()) {
    std::string failed;
    for (const auto& c : result.validation.checks) {
      if (!c.passed()) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    throw PlanValidationError("planned deployment failed validation: " + failed);
  }
  return result;
}

}  // namespace uavplan
