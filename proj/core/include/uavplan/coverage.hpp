#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uavplan/channel.hpp"
#include "uavplan/geometry.hpp"
#include "uavplan/model.hpp"

namespace uavplan {

/// Ball of positions from which a UAV meets one UE's demand under the design
/// LoS probability.
struct CoverageSphere {
  std::size_t ue_index = 0;
  Point3 center;
  double radius = 0.0;
};

/// Geometry shared by every deficit evaluation: the member spheres plus the
/// minimum elevation cone (sin of the elevation at which LoS probability reaches
/// the design threshold). A point is a valid placement for UE i iff it lies in
/// sphere i and sees UE i at or above that elevation.
struct CoverageGeometry {
  std::vector<CoverageSphere> spheres;
  double cone_sine = 0.0;
};

/// A nonempty intersection of coverage regions together with a certificate.
struct CandidateZone {
  std::vector<std::size_t> members;  // sorted UE indices
  Point3 witness;
  double slack = 0.0;  // min over members of radius - |witness - center|

  friend bool operator==(const CandidateZone&, const CandidateZone&) = default;
};

/// One sphere per UE, radius = max_service_distance(demand, bandwidth_hz).
/// Throws UnservableError listing every UE whose sphere cannot reach the
/// altitude band.
std::vector<CoverageSphere> build_spheres(const Scenario& scenario, const ChannelParams& params);

/// Spheres plus the elevation cone. With `check_servable` false, UEs whose
/// sphere misses the altitude band are kept instead of reported.
CoverageGeometry build_geometry(const Scenario& scenario, const ChannelParams& params, bool check_servable = true);

/// Max over members of the sphere and elevation-cone deficits, in meters.
/// Nonpositive iff `p` is a valid placement for every member.
double max_deficit(const Point3& p, std::span<const std::size_t> members, const CoverageGeometry& geometry);

/// Sphere slack of `p`: min over members of radius - distance.
double sphere_slack(const Point3& p, std::span<const std::size_t> members, const CoverageGeometry& geometry);

struct WitnessOptions {
  /// Stop as soon as a point with nonpositive deficit is found.
  bool stop_at_first_feasible = false;
  int max_iterations = 4000;
  /// Stop once the ellipsoid's reach along the last cut falls below this (m).
  double tolerance = 1e-9;
};

struct DeficitMinimum {
  Point3 point;               // best in-box point found
  double value = 0.0;         // max_deficit(point)
  double lower_bound = 0.0;   // certified lower bound on the minimum over the box
  int iterations = 0;

  [[nodiscard]] bool feasible() const { return value <= 0.0; }
  [[nodiscard]] bool certified_infeasible() const { return value > 0.0 && lower_bound > 0.0; }
};

/// Minimizes the (convex) max-deficit over `box` with a deterministic
/// central-cut ellipsoid method. The member centroid (clamped to the box) is the
/// first candidate; the ellipsoid starts around the box-clipped sphere bounds.
DeficitMinimum minimize_deficit(std::span<const std::size_t> members, const CoverageGeometry& geometry,
                                const FeasibleBox& box, const WitnessOptions& options = {});

/// A point in `box` inside every member region, or nullopt when none exists.
std::optional<Point3> zone_witness(std::span<const std::size_t> members, const CoverageGeometry& geometry,
                                   const FeasibleBox& box);

/// Builds a zone record for `members` certified by `witness`.
CandidateZone make_zone(std::vector<std::size_t> members, const Point3& witness, const CoverageGeometry& geometry);

struct EnumerationOptions {
  /// Components up to this size get exact maximal-zone enumeration from their
  /// infeasible subsets of size 2 to 4.
  std::size_t max_exact_component = 25;
  /// Search nodes allowed per exact component before falling back.
  std::size_t max_nodes_per_component = 2'000'000;
};

/// All maximal feasible zones, canonically ordered by member list.
std::vector<CandidateZone> enumerate_zones(const CoverageGeometry& geometry, const FeasibleBox& box,
                                           const EnumerationOptions& options = {});

/// Per-UAV user cap: the largest n such that the n smallest bandwidths fit in b_max.
std::size_t max_ues_per_uav(std::vector<double> bandwidths_hz, double b_max_hz);

/// Choice of zones (repetition allowed) plus the UE -> chosen-slot assignment.
struct ZoneSelection {
  std::vector<std::size_t> zones;  // indices into the zone list; may repeat
  std::vector<std::size_t> owner;  // per UE: position in `zones`
  [[nodiscard]] std::size_t size() const { return zones.size(); }
};

/// Assigns every UE to one selected zone containing it without exceeding any
/// zone's cap (bipartite b-matching). nullopt when impossible.
std::optional<std::vector<std::size_t>> assign_to_zones(std::span<const std::size_t> selected,
                                                        std::span<const CandidateZone> zones,
                                                        std::span<const std::size_t> caps, std::size_t n_ues);

/// Drops zones whose members are a subset of another zone with a cap at least
/// as large. Returns surviving indices in increasing order.
std::vector<std::size_t> undominated_zones(std::span<const CandidateZone> zones, std::span<const std::size_t> caps);

/// Largest-uncovered-first greedy; ties by larger slack then lower index.
ZoneSelection greedy_zone_cover(std::span<const CandidateZone> zones, std::span<const std::size_t> caps,
                                const CoverageGeometry& geometry);

/// Minimum-cardinality capacitated cover by iterative-deepening branch and
/// bound, searching sizes up to `max_size`. nullopt when no cover that small exists.
std::optional<ZoneSelection> exact_zone_cover(std::span<const CandidateZone> zones, std::span<const std::size_t> caps,
                                              std::size_t n_ues, std::size_t max_size);

struct CoverOptions {
  /// Exact search runs when at most this many zones survive dominance pruning.
  std::size_t exact_zone_limit = 20;
};

struct CoverOutcome {
  std::vector<CandidateZone> groups;  // one per UAV, members = assigned UEs
  std::optional<std::vector<CandidateZone>> greedy_groups;
  bool exact = false;
};

/// Raised when some UE belongs to no zone.
class UncoverableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Capacity-aware minimum zone cover. Each returned group is a subset of one
/// input zone, keeps that zone's witness, and has at most cap members.
CoverOutcome minimal_zone_cover(std::span<const CandidateZone> zones, const CoverageGeometry& geometry,
                                std::span<const std::size_t> caps, const CoverOptions& options = {});

}  // namespace uavplan
