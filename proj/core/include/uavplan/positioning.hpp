#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "uavplan/channel.hpp"
#include "uavplan/coverage.hpp"
#include "uavplan/model.hpp"

namespace uavplan {

/// Particle swarm settings. Defaults are the reference parameter set;
/// the cognitive/social pairing is the usual stable choice for w = 0.7.
struct SwarmConfig {
  std::size_t particle_count = 30;
  std::size_t max_iterations = 100;
  double inertia_weight = 0.7;
  double cognitive_coeff = 1.5;
  double social_coeff = 1.5;
  double position_precision_m = 1.0;
  std::size_t early_stop_patience = 10;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  friend bool operator==(const SwarmConfig&, const SwarmConfig&) = default;
};

struct Particle {
  Point3 position;
  Point3 velocity;
  Point3 best_position;
  double best_fitness = 0.0;
};

struct ServedUe {
  std::size_t ue = 0;
  double bandwidth_hz = 0.0;
  double rate_bps = 0.0;

  friend bool operator==(const ServedUe&, const ServedUe&) = default;
};

struct TracePoint {
  std::size_t iteration = 0;
  double gbest_fitness = 0.0;
  Point3 gbest_position;
};

struct PlacementSolution {
  Point3 uav_position;
  std::vector<ServedUe> served;
  double fitness = 0.0;
  bool feasible = false;
  std::vector<TracePoint> trace;
};

struct FitnessValue {
  double value = 0.0;  // bit/s; capped throughput minus penalties
  bool feasible = false;
  std::size_t demand_violations = 0;
  bool capacity_violated = false;
  bool outside_box = false;
};

/// Bandwidth the scenario's policy gives `ue` when served from `uav`: the
/// nominal value under `fixed`; under `demand-fit` the smallest 1 kHz multiple
/// that meets demand, or the ceiling when nothing within it does.
double allocate_bandwidth(const Scenario& scenario, std::size_t ue, const Point3& uav, const ChannelParams& params);

/// Rate of `ue` from `uav` over `bandwidth_hz`; zero when the UAV is not above the UE.
double served_rate(const Scenario& scenario, std::size_t ue, const Point3& uav, double bandwidth_hz,
                   const ChannelParams& params);

/// Capped aggregate throughput of the zone's members minus a dominating penalty
/// per violated demand, for capacity overflow, and for leaving the venue box.
FitnessValue fitness(const Point3& position, const CandidateZone& zone, const Scenario& scenario,
                     const ChannelParams& params);

class InfeasibleZoneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PositionSearchOptions {
  /// Pin every particle to this altitude (fixed-altitude baseline).
  std::optional<double> altitude;
  /// Snap a rate-feasible best that left the zone back into it.
  bool snap_to_zone = true;
  /// Coverage geometry for the init region and snapping; built from the scenario when absent.
  const CoverageGeometry* geometry = nullptr;
  bool record_trace = false;
};

/// Global-best PSO for one UAV serving `zone`. Never throws on infeasibility;
/// the returned solution reports it.
PlacementSolution search_position(const CandidateZone& zone, const Scenario& scenario, const ChannelParams& params,
                                  const SwarmConfig& config, const PositionSearchOptions& options = {});

/// As search_position, but throws InfeasibleZoneError when no feasible placement is found.
PlacementSolution optimize_position(const CandidateZone& zone, const Scenario& scenario, const ChannelParams& params,
                                    const SwarmConfig& config, const PositionSearchOptions& options = {});

}  // namespace uavplan
