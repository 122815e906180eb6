#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavplan/channel.hpp"
#include "uavplan/coverage.hpp"
#include "uavplan/model.hpp"
#include "uavplan/positioning.hpp"

namespace uavplan {

/// UE-to-UAV association. Entries are ints so that malformed, hand-built
/// deployments can still be represented and reported by the validator.
struct Association {
  std::vector<std::vector<int>> z;  // z[ue][uav]
  std::vector<int> a;               // a[uav]

  friend bool operator==(const Association&, const Association&) = default;
};

struct Link {
  std::size_t ue = 0;
  std::size_t uav = 0;
  double bandwidth_hz = 0.0;
  double rate_bps = 0.0;

  friend bool operator==(const Link&, const Link&) = default;
};

struct Deployment {
  std::vector<Point3> uav_positions;
  Association association;
  std::vector<Link> links;  // one per z = 1 entry, ordered by UE
  std::size_t uav_count = 0;
  double aggregate_throughput_bps = 0.0;

  friend bool operator==(const Deployment&, const Deployment&) = default;
};

/// Builds a deployment in which group g is served by the UAV at positions[g].
/// Bandwidths follow the scenario policy; rates come from the channel model.
Deployment make_deployment(const std::vector<std::vector<std::size_t>>& groups, const std::vector<Point3>& positions,
                           const Scenario& scenario, const ChannelParams& params);

struct ConstraintCheck {
  std::string name;
  double residual = 0.0;  // 0 when satisfied, otherwise the worst excess
  std::string unit;
  std::size_t violations = 0;

  [[nodiscard]] bool passed() const { return violations == 0; }
};

struct ValidationReport {
  std::vector<ConstraintCheck> checks;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] const ConstraintCheck* find(const std::string& name) const;
};

/// Relative slack allowed on rate >= demand.
inline constexpr double kRateTolerance = 1e-9;

/// Re-checks demand, capacity, unique association, activation linkage and
/// binarity from positions and link bandwidths alone. Never throws.
ValidationReport validate_deployment(const Deployment& deployment, const Scenario& scenario,
                                     const ChannelParams& params);

/// Header `constraint,residual,unit,violations,passed`.
void write_validation_csv(std::ostream& out, const ValidationReport& report);

/// Splits `zone` into ceil(|members| / n_max) groups by recursive bisection
/// along the principal axis of member positions, each with a fresh witness.
/// Groups whose witness cannot be found are replaced by singletons.
std::vector<CandidateZone> split_zone(const CandidateZone& zone, const Scenario& scenario, std::size_t n_max,
                                      const CoverageGeometry& geometry);

struct PlanOptions {
  EnumerationOptions enumeration;
  CoverOptions cover;
  bool record_traces = false;
};

struct PlanResult {
  Deployment deployment;
  ValidationReport validation;
  std::vector<CandidateZone> zones;        // all maximal zones
  std::vector<CandidateZone> groups;       // final groups, one per UAV, same order as positions
  std::vector<Deployment> pool;            // every complete candidate, selected one included
  std::vector<std::vector<TracePoint>> traces;  // per final UAV, when requested
  bool exact_cover = false;
};

/// Raised when the selected deployment fails validation; indicates a bug.
class PlanValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lower bound on the bandwidth `ue` needs anywhere in the box: the policy's
/// allocation from directly overhead at the lowest altitude.
double bandwidth_floor(const Scenario& scenario, std::size_t ue, const ChannelParams& params);

/// Per-zone UE cap used by the cover.
std::vector<std::size_t> zone_caps(std::span<const CandidateZone> zones, const Scenario& scenario,
                                   const ChannelParams& params);

/// Spheres -> maximal zones -> minimal capacitated cover -> per-group PSO, with
/// capacity splits, then selection of the fewest UAVs and highest throughput.
/// Throws UnservableError, CapacityDeadlockError or std::invalid_argument.
PlanResult plan_deployment(const Scenario& scenario, const ChannelParams& params, const SwarmConfig& config,
                           const PlanOptions& options = {});

}  // namespace uavplan
