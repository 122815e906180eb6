#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "support/builders.hpp"
#include "uavplan/coverage.hpp"

using namespace uavplan;
using testing_support::square_scenario;

namespace {

std::vector<std::size_t> all_members(std::size_t n) {
  std::vector<std::size_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = i;
  return m;
}

}  // namespace

TEST(Spheres, RadiusIsServiceDistance) {
  const ChannelParams p;
  const auto s = square_scenario(100, {{10, 10}, {90, 90}}, 6.5e6);
  const auto spheres = build_spheres(s, p);
  ASSERT_EQ(spheres.size(), 2u);
  EXPECT_EQ(spheres[1].ue_index, 1u);
  EXPECT_EQ(spheres[0].radius, max_service_distance(6.5e6, 20e6, p));
  EXPECT_EQ(spheres[1].center, (Point3{90, 90, 0}));
}

TEST(Spheres, UnservableListsEveryOffender) {
  const ChannelParams p;
  auto s = square_scenario(100, {{10, 10}, {50, 50}, {90, 90}}, 6.5e6);
  s.ues[0].demand_bps = 52e6;
  s.ues[2].demand_bps = 52e6;
  s.venue.z_min = 110.0;  // above the 52 Mbit/s radius of about 107.6 m
  try {
    build_spheres(s, p);
    FAIL() << "expected UnservableError";
  } catch (const UnservableError& e) {
    EXPECT_EQ(e.ue_indices(), (std::vector<std::size_t>{0, 2}));
  }
  EXPECT_NO_THROW(build_geometry(s, p, false));
}

TEST(Geometry, ConeSineMatchesThresholdElevation) {
  const ChannelParams p;
  const auto g = build_geometry(square_scenario(100, {{1, 1}}, 6.5e6), p);
  EXPECT_NEAR(g.cone_sine, std::sin(25.52495598503575 * std::numbers::pi / 180.0), 1e-14);
}

TEST(Deficit, ConeAndSphereTerms) {
  const ChannelParams p;
  const auto g = build_geometry(square_scenario(500, {{0, 0}}, 6.5e6), p);
  const std::vector<std::size_t> m{0};
  EXPECT_LT(max_deficit({0, 0, 50}, m, g), 0.0);
  // Low elevation but well inside the sphere: the cone term is positive.
  EXPECT_GT(max_deficit({300, 0, 10}, m, g), 0.0);
  EXPECT_LT(path_distance({300, 0, 10}, {0, 0, 0}), g.spheres[0].radius);
  // Straight up, beyond the radius.
  EXPECT_NEAR(max_deficit({0, 0, 600}, m, g), 600 - g.spheres[0].radius, 1e-9);
  EXPECT_NEAR(sphere_slack({0, 0, 100}, m, g), g.spheres[0].radius - 100.0, 1e-12);
}

TEST(Witness, FeasiblePointIsValidAndInBox) {
  const ChannelParams p;
  const auto s = square_scenario(100, {{10, 10}, {90, 10}, {50, 90}}, 6.5e6);
  const auto g = build_geometry(s, p);
  const auto members = all_members(3);
  const auto w = zone_witness(members, g, s.venue);
  ASSERT_TRUE(w);
  EXPECT_TRUE(s.venue.contains(*w));
  EXPECT_LE(max_deficit(*w, members, g), 0.0);
  for (auto i : members) EXPECT_GE(link_rate(s.ues[i].position, *w, 20e6, p), 6.5e6);
}

TEST(Witness, FarApartPairIsCertifiedInfeasible) {
  const ChannelParams p;
  const auto s = square_scenario(500, {{0, 0}, {500, 500}}, 52e6);
  const auto g = build_geometry(s, p);
  const auto m = minimize_deficit(all_members(2), g, s.venue);
  EXPECT_TRUE(m.certified_infeasible());
  EXPECT_FALSE(zone_witness(all_members(2), g, s.venue));
}

TEST(Witness, DeterministicAndAgreesWithIndependentMinimizer) {
  const ChannelParams p;
  std::size_t compared = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto s = testing_support::random_scenario(seed, 5, 80, 500, 0, 5);
    const auto g = build_geometry(s, p);
    const auto members = all_members(s.size());
    const auto a = minimize_deficit(members, g, s.venue);
    const auto b = minimize_deficit(members, g, s.venue);
    EXPECT_EQ(a.point, b.point);
    EXPECT_TRUE(s.venue.contains(a.point));
    const double truth = oracle::group_deficit_min(testing_support::sites_of(g), g.cone_sine,
                                                   testing_support::region_of(s.venue));
    if (std::abs(truth) < 1e-3) continue;
    ++compared;
    EXPECT_EQ(a.feasible(), truth <= 0.0) << "seed " << seed;
    EXPECT_LE(a.lower_bound, a.value);
    // Past a positive certificate the search stops early, so only feasible minima are comparable.
    if (truth <= 0.0) EXPECT_NEAR(a.value, truth, 1e-3) << "seed " << seed;
  }
  EXPECT_GT(compared, 40u);
}

TEST(Zones, MaximalCanonicalAndMatchBruteForce) {
  const ChannelParams p;
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const auto s = testing_support::random_scenario(seed, 7, 150, 500, 0, 5);
    const auto g = build_geometry(s, p);
    const auto zones = enumerate_zones(g, s.venue);
    ASSERT_FALSE(zones.empty());
    EXPECT_TRUE(std::is_sorted(zones.begin(), zones.end(),
                               [](const auto& l, const auto& r) { return l.members < r.members; }));
    std::vector<char> covered(s.size(), 0);
    for (const auto& z : zones) {
      EXPECT_LE(max_deficit(z.witness, z.members, g), 0.0);
      EXPECT_TRUE(s.venue.contains(z.witness));
      for (auto m : z.members) covered[m] = 1;
    }
    EXPECT_TRUE(std::all_of(covered.begin(), covered.end(), [](char c) { return c; }));

    // Brute force: feasible masks by independent minimization, then the maximal ones.
    const auto sites = testing_support::sites_of(g);
    const std::size_t n = s.size();
    const std::uint32_t full = (1u << n) - 1u;
    std::vector<char> ok(full + 1, 0);
    bool ambiguous = false;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      std::vector<oracle::Site> group;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1u) group.push_back(sites[i]);
      }
      const double v = oracle::group_deficit_min(group, g.cone_sine, testing_support::region_of(s.venue), 36);
      if (std::abs(v) < 1e-3) ambiguous = true;
      ok[mask] = v <= 0.0;
    }
    if (ambiguous) continue;
    std::vector<std::vector<std::size_t>> expected;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      if (!ok[mask]) continue;
      bool maximal = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(mask >> i & 1u) && ok[mask | (1u << i)]) maximal = false;
      }
      if (!maximal) continue;
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1u) members.push_back(i);
      }
      expected.push_back(members);
    }
    std::sort(expected.begin(), expected.end());
    std::vector<std::vector<std::size_t>> got;
    for (const auto& z : zones) got.push_back(z.members);
    EXPECT_EQ(got, expected) << "seed " << seed;
  }
}

TEST(Zones, CoincidentUesFormOneZone) {
  const ChannelParams p;
  const auto s = square_scenario(100, std::vector<std::pair<double, double>>(12, {50, 50}), 6.5e6);
  const auto zones = enumerate_zones(build_geometry(s, p), s.venue);
  ASSERT_EQ(zones.size(), 1u);
  EXPECT_EQ(zones[0].members.size(), 12u);
}

TEST(Zones, LargeComponentFallsBackToHeuristic) {
  const ChannelParams p;
  std::vector<std::pair<double, double>> xy;
  for (int i = 0; i < 40; ++i) xy.emplace_back(5.0 * i, 0.0);
  const auto s = square_scenario(200, xy, 6.5e6);
  const auto g = build_geometry(s, p);
  const auto zones = enumerate_zones(g, s.venue);
  ASSERT_FALSE(zones.empty());
  for (const auto& z : zones) EXPECT_LE(max_deficit(z.witness, z.members, g), 0.0);
}

TEST(Capacity, MaxUesPerUav) {
  EXPECT_EQ(max_ues_per_uav(std::vector<double>(20, 20e6), 160e6), 8u);
  EXPECT_EQ(max_ues_per_uav({30e6, 10e6, 100e6, 25e6}, 50e6), 2u);
  EXPECT_EQ(max_ues_per_uav({200e6}, 160e6), 0u);
  EXPECT_EQ(max_ues_per_uav({}, 160e6), 0u);
}

TEST(Cover, AssignmentRespectsCaps) {
  const CoverageGeometry g{{{0, {0, 0, 0}, 1}, {1, {1, 0, 0}, 1}, {2, {2, 0, 0}, 1}}, 0.0};
  const std::vector<CandidateZone> zones{make_zone({0, 1, 2}, {}, g), make_zone({2}, {}, g)};
  const std::vector<std::size_t> caps{2, 1};
  const std::vector<std::size_t> one{0};
  EXPECT_FALSE(assign_to_zones(one, zones, caps, 3));
  const std::vector<std::size_t> both{0, 1};
  const auto owner = assign_to_zones(both, zones, caps, 3);
  ASSERT_TRUE(owner);
  EXPECT_EQ((*owner)[2], 1u);
  const std::vector<std::size_t> twice{0, 0};
  EXPECT_TRUE(assign_to_zones(twice, zones, caps, 3));
}

TEST(Cover, DominatedZonesDropped) {
  const CoverageGeometry g{{{0, {}, 1}, {1, {}, 1}, {2, {}, 1}}, 0.0};
  const std::vector<CandidateZone> zones{make_zone({0, 1}, {}, g), make_zone({0, 1, 2}, {}, g),
                                         make_zone({2}, {}, g)};
  EXPECT_EQ(undominated_zones(zones, std::vector<std::size_t>{2, 2, 1}), (std::vector<std::size_t>{1}));
  EXPECT_EQ(undominated_zones(zones, std::vector<std::size_t>{3, 2, 1}), (std::vector<std::size_t>{0, 1}));
}

TEST(Cover, ExactMatchesHallOracleAndGreedyIsNoBetter) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto c = testing_support::synthetic_cover(seed, 8, 8);
    const auto expected = oracle::min_cover_size(c.instance());
    ASSERT_TRUE(expected);
    const auto outcome = minimal_zone_cover(c.zones, c.geometry, c.caps);
    EXPECT_TRUE(outcome.exact);
    EXPECT_EQ(outcome.groups.size(), *expected) << "seed " << seed;
    const auto greedy = greedy_zone_cover(c.zones, c.caps, c.geometry);
    EXPECT_GE(greedy.size(), *expected);
    // Groups partition the UEs and respect the zone caps.
    std::vector<int> seen(c.geometry.spheres.size(), 0);
    for (const auto& grp : outcome.groups) {
      for (auto m : grp.members) ++seen[m];
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
  }
}

TEST(Cover, UncoverableUeThrows) {
  const CoverageGeometry g{{{0, {}, 1}, {1, {}, 1}}, 0.0};
  const std::vector<CandidateZone> zones{make_zone({0}, {}, g)};
  EXPECT_THROW(minimal_zone_cover(zones, g, std::vector<std::size_t>{1}), UncoverableError);
}
