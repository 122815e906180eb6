#include "uavplan/positioning.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "uavplan/random.hpp"

namespace uavplan {

void SwarmConfig::validate() const {
  if (particle_count < 2) throw std::invalid_argument("pso: particle_count must be >= 2");
  if (max_iterations < 1) throw std::invalid_argument("pso: max_iterations must be >= 1");
  if (!(inertia_weight > 0.0 && inertia_weight < 1.0)) throw std::invalid_argument("pso: inertia_weight must lie in (0, 1)");
  if (!(cognitive_coeff >= 0.0) || !(social_coeff >= 0.0)) {
    throw std::invalid_argument("pso: acceleration coefficients must be >= 0");
  }
  if (!(position_precision_m > 0.0)) throw std::invalid_argument("pso: position_precision_m must be > 0");
}

double served_rate(const Scenario& scenario, std::size_t ue, const Point3& uav, double bandwidth_hz,
                   const ChannelParams& params) {
  const Point3& at = scenario.ues[ue].position;
  if (!(uav.z > at.z) || !(bandwidth_hz > 0.0)) return 0.0;
  return link_rate(at, uav, bandwidth_hz, params);
}

double allocate_bandwidth(const Scenario& scenario, std::size_t ue, const Point3& uav, const ChannelParams& params) {
  const auto& user = scenario.ues[ue];
  if (scenario.bandwidth_policy == BandwidthPolicy::fixed) return user.bandwidth_hz;
  if (!(uav.z > user.position.z)) return user.bandwidth_hz;
  const double gain = channel_gain(user.position, uav, params);
  return min_bandwidth_for_rate(user.demand_bps, gain, user.bandwidth_hz, params).value_or(user.bandwidth_hz);
}

FitnessValue fitness(const Point3& position, const CandidateZone& zone, const Scenario& scenario,
                     const ChannelParams& params) {
  FitnessValue out;
  double demand_total = 0.0;
  double throughput = 0.0;
  double bandwidth_total = 0.0;
  for (auto m : zone.members) {
    const auto& ue = scenario.ues[m];
    demand_total += ue.demand_bps;
    const double rate = served_rate(scenario, m, position, ue.bandwidth_hz, params);
    throughput += std::min(rate, ue.demand_bps);
    if (rate < ue.demand_bps) ++out.demand_violations;
    bandwidth_total += allocate_bandwidth(scenario, m, position, params);
  }
  out.capacity_violated = bandwidth_total > scenario.b_max_hz;
  out.outside_box = !scenario.venue.contains(position);
  const double penalty_unit = 10.0 * demand_total;
  const double violations = static_cast<double>(out.demand_violations) + (out.capacity_violated ? 1.0 : 0.0) +
                            (out.outside_box ? 1.0 : 0.0);
  out.value = throughput - penalty_unit * violations;
  out.feasible = violations == 0.0;
  return out;
}

namespace {

FeasibleBox search_box(const Scenario& scenario, const PositionSearchOptions& options) {
  FeasibleBox box = scenario.venue;
  if (options.altitude) box.z_min = box.z_max = *options.altitude;
  return box;
}

// Bounding box of the member-sphere intersection, clipped to `box`; the whole
// box when that is empty.
FeasibleBox init_region(const CandidateZone& zone, const CoverageGeometry& geometry, const FeasibleBox& box) {
  FeasibleBox region = box;
  for (auto m : zone.members) {
    const auto& s = geometry.spheres[m];
    region.x_min = std::max(region.x_min, s.center.x - s.radius);
    region.x_max = std::min(region.x_max, s.center.x + s.radius);
    region.y_min = std::max(region.y_min, s.center.y - s.radius);
    region.y_max = std::min(region.y_max, s.center.y + s.radius);
    region.z_min = std::max(region.z_min, s.center.z - s.radius);
    region.z_max = std::min(region.z_max, s.center.z + s.radius);
  }
  for (int k = 0; k < 3; ++k) {
    if (region.lower(k) > region.upper(k)) return box;
  }
  return region;
}

Point3 snap_into_zone(const Point3& from, const CandidateZone& zone, const CoverageGeometry& geometry) {
  // Deficit is convex, so along the segment towards the witness the valid
  // part is an interval ending at the witness.
  double lo = 0.0;
  double hi = 1.0;
  auto at = [&](double t) { return from + t * (zone.witness - from); };
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (max_deficit(at(mid), zone.members, geometry) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return at(hi);
}

}  // namespace

PlacementSolution search_position(const CandidateZone& zone, const Scenario& scenario, const ChannelParams& params,
                                  const SwarmConfig& config, const PositionSearchOptions& options) {
  CoverageGeometry owned;
  const CoverageGeometry* geometry = options.geometry;
  if (geometry == nullptr) {
    owned = build_geometry(scenario, params, false);
    geometry = &owned;
  }

  const FeasibleBox box = search_box(scenario, options);
  const FeasibleBox region = init_region(zone, *geometry, box);
  std::array<double, 3> vmax{};
  for (int k = 0; k < 3; ++k) vmax[k] = 0.5 * box.extent(k);

  auto score = [&](const Point3& p) { return fitness(p, zone, scenario, params); };

  std::vector<Particle> swarm(config.particle_count);
  std::vector<UniformStream> streams;
  streams.reserve(swarm.size());
  for (std::size_t i = 0; i < swarm.size(); ++i) streams.emplace_back(mix_seed(config.seed, i));

  for (std::size_t i = 0; i < swarm.size(); ++i) {
    auto& particle = swarm[i];
    auto& rng = streams[i];
    if (i == 0) {
      particle.position = box.clamp(zone.witness);
    } else {
      for (int k = 0; k < 3; ++k) {
        particle.position[k] = rng.next(region.lower(k), region.upper(k));
        particle.velocity[k] = rng.next(-0.5, 0.5) * region.extent(k);
      }
    }
    particle.best_position = particle.position;
    particle.best_fitness = score(particle.position).value;
  }

  std::size_t leader = 0;
  for (std::size_t i = 1; i < swarm.size(); ++i) {
    if (swarm[i].best_fitness > swarm[leader].best_fitness) leader = i;
  }
  Point3 gbest = swarm[leader].best_position;
  FitnessValue gbest_value = score(gbest);

  PlacementSolution solution;
  if (options.record_trace) solution.trace.push_back({0, gbest_value.value, gbest});

  std::size_t stagnant = 0;
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    for (std::size_t i = 0; i < swarm.size(); ++i) {
      auto& particle = swarm[i];
      auto& rng = streams[i];
      for (int k = 0; k < 3; ++k) {
        const double r1 = rng.next();
        const double r2 = rng.next();
        double v = config.inertia_weight * particle.velocity[k] +
                   config.cognitive_coeff * r1 * (particle.best_position[k] - particle.position[k]) +
                   config.social_coeff * r2 * (gbest[k] - particle.position[k]);
        v = std::clamp(v, -vmax[k], vmax[k]);
        particle.velocity[k] = v;
        particle.position[k] += v;
      }
      particle.position = box.clamp(particle.position);
    }
    // Evaluation is independent per particle; the leader update is the barrier.
    for (auto& particle : swarm) {
      const double f = score(particle.position).value;
      if (f > particle.best_fitness) {
        particle.best_fitness = f;
        particle.best_position = particle.position;
      }
    }
    const Point3 previous = gbest;
    for (const auto& particle : swarm) {
      if (particle.best_fitness > gbest_value.value) {
        gbest = particle.best_position;
        gbest_value = score(gbest);
      }
    }
    if (options.record_trace) solution.trace.push_back({it, gbest_value.value, gbest});

    const bool settled = path_distance(previous, gbest) < config.position_precision_m;
    stagnant = (gbest_value.feasible && settled) ? stagnant + 1 : 0;
    if (stagnant >= config.early_stop_patience) break;
  }

  if (options.snap_to_zone && !options.altitude && gbest_value.feasible &&
      max_deficit(gbest, zone.members, *geometry) > 0.0 &&
      max_deficit(zone.witness, zone.members, *geometry) <= 0.0) {
    const Point3 snapped = snap_into_zone(gbest, zone, *geometry);
    const FitnessValue snapped_value = score(snapped);
    if (snapped_value.feasible) {
      gbest = snapped;
      gbest_value = snapped_value;
    }
  }

  solution.uav_position = gbest;
  solution.fitness = gbest_value.value;
  solution.feasible = gbest_value.feasible;
  for (auto m : zone.members) {
    const double bandwidth = allocate_bandwidth(scenario, m, gbest, params);
    solution.served.push_back({m, bandwidth, served_rate(scenario, m, gbest, bandwidth, params)});
  }
  return solution;
}

PlacementSolution optimize_position(const CandidateZone& zone, const Scenario& scenario, const ChannelParams& params,
                                    const SwarmConfig& config, const PositionSearchOptions& options) {
  auto solution = search_position(zone, scenario, params, config, options);
  if (!solution.feasible) {
    throw InfeasibleZoneError("no feasible UAV position for a zone of " + std::to_string(zone.members.size()) +
                              " UEs");
  }
  return solution;
}

}  // namespace uavplan
