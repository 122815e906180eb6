#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "uavplan/coverage.hpp"

namespace uavplan {

namespace {

std::vector<CoverageSphere> spheres_for(const Scenario& scenario, const ChannelParams& params, bool check_servable) {
  std::vector<CoverageSphere> spheres;
  spheres.reserve(scenario.ues.size());
  std::vector<std::size_t> unservable;
  for (std::size_t i = 0; i < scenario.ues.size(); ++i) {
    const auto& ue = scenario.ues[i];
    const double radius = max_service_distance(ue.demand_bps, ue.bandwidth_hz, params);
    if (radius < scenario.venue.z_min - ue.position.z) unservable.push_back(i);
    spheres.push_back({i, ue.position, radius});
  }
  if (check_servable && !unservable.empty()) throw UnservableError(std::move(unservable));
  return spheres;
}

}  // namespace

std::vector<CoverageSphere> build_spheres(const Scenario& scenario, const ChannelParams& params) {
  return spheres_for(scenario, params, true);
}

CoverageGeometry build_geometry(const Scenario& scenario, const ChannelParams& params, bool check_servable) {
  CoverageGeometry geometry;
  geometry.spheres = spheres_for(scenario, params, check_servable);
  const double theta = params.threshold_elevation_deg() * std::numbers::pi / 180.0;
  geometry.cone_sine = std::clamp(std::sin(theta), 0.0, 1.0);
  return geometry;
}

namespace {

struct Term {
  double value;
  Point3 subgradient;
};

// Deficit of one member and a subgradient of it.
Term member_deficit(const Point3& p, const CoverageSphere& sphere, double cone_sine) {
  const Point3 offset = p - sphere.center;
  const double dist = offset.norm();
  const Point3 unit = dist > 0.0 ? (1.0 / dist) * offset : Point3{};
  const double ball = dist - sphere.radius;
  const double cone = cone_sine * dist - offset.z;
  if (ball >= cone) return {ball, unit};
  return {cone, cone_sine * unit - Point3{0.0, 0.0, 1.0}};
}

Term evaluate(const Point3& p, std::span<const std::size_t> members, const CoverageGeometry& geometry) {
  Term worst{-std::numeric_limits<double>::infinity(), {}};
  for (auto m : members) {
    const Term t = member_deficit(p, geometry.spheres[m], geometry.cone_sine);
    if (t.value > worst.value) worst = t;
  }
  return worst;
}

using Mat3 = std::array<std::array<double, 3>, 3>;

}  // namespace

double max_deficit(const Point3& p, std::span<const std::size_t> members, const CoverageGeometry& geometry) {
  return evaluate(p, members, geometry).value;
}

double sphere_slack(const Point3& p, std::span<const std::size_t> members, const CoverageGeometry& geometry) {
  double slack = std::numeric_limits<double>::infinity();
  for (auto m : members) {
    const auto& s = geometry.spheres[m];
    slack = std::min(slack, s.radius - path_distance(p, s.center));
  }
  return slack;
}

DeficitMinimum minimize_deficit(std::span<const std::size_t> members, const CoverageGeometry& geometry,
                                const FeasibleBox& box, const WitnessOptions& options) {
  DeficitMinimum result;
  result.lower_bound = -std::numeric_limits<double>::infinity();

  // Search region: the box intersected with every member sphere's bounding box.
  std::array<double, 3> lo{}, hi{};
  Point3 centroid;
  for (int k = 0; k < 3; ++k) {
    lo[k] = box.lower(k);
    hi[k] = box.upper(k);
  }
  for (auto m : members) {
    const auto& s = geometry.spheres[m];
    centroid = centroid + s.center;
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::max(lo[k], s.center[k] - s.radius);
      hi[k] = std::min(hi[k], s.center[k] + s.radius);
    }
  }
  centroid = (1.0 / static_cast<double>(members.size())) * centroid;

  result.point = box.clamp(centroid);
  result.value = max_deficit(result.point, members, geometry);

  double gap = 0.0;
  for (int k = 0; k < 3; ++k) gap = std::max(gap, 0.5 * (lo[k] - hi[k]));
  if (gap > 0.0) {
    // Some point of every candidate lies at least `gap` outside one member's bounding box.
    result.lower_bound = gap;
    return result;
  }
  if (options.stop_at_first_feasible && result.value <= 0.0) return result;

  Point3 x{0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])};
  Mat3 shape{};
  for (int k = 0; k < 3; ++k) {
    const double half = std::max(0.5 * (hi[k] - lo[k]), 1e-9);
    shape[k][k] = 3.0 * half * half;
  }

  auto inside_region = [&](const Point3& p) {
    for (int k = 0; k < 3; ++k) {
      if (p[k] < lo[k] || p[k] > hi[k]) return false;
    }
    return true;
  };

  constexpr double n = 3.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    Point3 g;
    bool objective_cut = false;
    double fx = 0.0;
    if (!inside_region(x)) {
      for (int k = 0; k < 3; ++k) {
        if (x[k] < lo[k]) {
          g[k] = -1.0;
          break;
        }
        if (x[k] > hi[k]) {
          g[k] = 1.0;
          break;
        }
      }
    } else {
      const Term t = evaluate(x, members, geometry);
      fx = t.value;
      g = t.subgradient;
      objective_cut = true;
      if (fx < result.value) {
        result.value = fx;
        result.point = x;
      }
      if (g.x == 0.0 && g.y == 0.0 && g.z == 0.0) {
        result.lower_bound = std::max(result.lower_bound, fx);
        break;
      }
    }

    Point3 pg;
    for (int r = 0; r < 3; ++r) pg[r] = shape[r][0] * g.x + shape[r][1] * g.y + shape[r][2] * g.z;
    const double gpg = g.x * pg.x + g.y * pg.y + g.z * pg.z;
    if (!(gpg > 0.0)) break;
    const double reach = std::sqrt(gpg);
    if (objective_cut) result.lower_bound = std::max(result.lower_bound, fx - reach);

    if (options.stop_at_first_feasible && result.value <= 0.0) break;
    if (result.lower_bound > 0.0 || reach < options.tolerance) break;

    const Point3 b = (1.0 / reach) * pg;
    x = x - (1.0 / (n + 1.0)) * b;
    const double scale = n * n / (n * n - 1.0);
    const double shrink = 2.0 / (n + 1.0);
    for (int r = 0; r < 3; ++r) {
      for (int c = r; c < 3; ++c) {
        const double v = scale * (shape[r][c] - shrink * b[r] * b[c]);
        shape[r][c] = v;
        shape[c][r] = v;
      }
    }
  }
  return result;
}

std::optional<Point3> zone_witness(std::span<const std::size_t> members, const CoverageGeometry& geometry,
                                   const FeasibleBox& box) {
  if (members.empty()) return std::nullopt;
  const auto minimum = minimize_deficit(members, geometry, box);
  if (!minimum.feasible()) return std::nullopt;
  return minimum.point;
}

CandidateZone make_zone(std::vector<std::size_t> members, const Point3& witness, const CoverageGeometry& geometry) {
  std::sort(members.begin(), members.end());
  CandidateZone zone;
  zone.witness = witness;
  zone.slack = sphere_slack(witness, members, geometry);
  zone.members = std::move(members);
  return zone;
}

}  // namespace uavplan
