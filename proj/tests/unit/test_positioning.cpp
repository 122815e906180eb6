#include <gtest/gtest.h>

#include "support/builders.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/positioning.hpp"
#include "uavplan/random.hpp"

using namespace uavplan;
using testing_support::square_scenario;

TEST(Random, StreamsAreReproducibleAndInRange) {
  UniformStream a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    differs |= x != c.next();
    EXPECT_LT(a.next_index(7), 7u);
    b.next_index(7);
  }
  EXPECT_TRUE(differs);
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(0), 0u);
}

TEST(SwarmConfig, Validation) {
  SwarmConfig c;
  EXPECT_NO_THROW(c.validate());
  c.inertia_weight = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.particle_count = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Bandwidth, FixedAndDemandFit) {
  const ChannelParams p;
  auto s = square_scenario(100, {{50, 50}}, 6.5e6);
  s.bandwidth_policy = BandwidthPolicy::fixed;
  EXPECT_EQ(allocate_bandwidth(s, 0, {50, 50, 30}, p), 20e6);
  s.bandwidth_policy = BandwidthPolicy::demand_fit;
  const double b = allocate_bandwidth(s, 0, {50, 50, 30}, p);
  EXPECT_LT(b, 20e6);
  EXPECT_GE(served_rate(s, 0, {50, 50, 30}, b, p), 6.5e6);
  EXPECT_EQ(served_rate(s, 0, {50, 50, 0}, b, p), 0.0);
}

TEST(Fitness, PenaltiesDominateThroughput) {
  const ChannelParams p;
  const auto s = square_scenario(500, {{0, 0}, {20, 0}}, 6.5e6);
  const auto g = build_geometry(s, p);
  const auto zone = make_zone({0, 1}, {10, 0, 40}, g);
  const auto good = fitness({10, 0, 40}, zone, s, p);
  EXPECT_TRUE(good.feasible);
  EXPECT_DOUBLE_EQ(good.value, 13e6);
  const auto far = fitness({480, 480, 20}, zone, s, p);
  EXPECT_FALSE(far.feasible);
  EXPECT_EQ(far.demand_violations, 2u);
  EXPECT_LT(far.value, 0.0);
  const auto outside = fitness({10, 0, 200}, zone, s, p);
  EXPECT_TRUE(outside.outside_box);
  EXPECT_FALSE(outside.feasible);
}

TEST(Fitness, CapacityOverflowFlagged) {
  const ChannelParams p;
  auto s = square_scenario(100, std::vector<std::pair<double, double>>(9, {50, 50}), 6.5e6);
  s.bandwidth_policy = BandwidthPolicy::fixed;
  const auto g = build_geometry(s, p);
  std::vector<std::size_t> members(9);
  for (std::size_t i = 0; i < 9; ++i) members[i] = i;
  const auto zone = make_zone(members, {50, 50, 20}, g);
  const auto f = fitness({50, 50, 20}, zone, s, p);
  EXPECT_TRUE(f.capacity_violated);
  EXPECT_EQ(f.demand_violations, 0u);
  EXPECT_FALSE(f.feasible);
}

TEST(Search, DeterministicFeasibleAndValidated) {
  const ChannelParams p;
  const SwarmConfig config;
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto s = testing_support::random_scenario(seed, 6, 50, 150, 0, 3);
    const auto g = build_geometry(s, p);
    std::vector<std::size_t> members(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) members[i] = i;
    const auto w = zone_witness(members, g, s.venue);
    if (!w) continue;
    const auto zone = make_zone(members, *w, g);
    PositionSearchOptions opt;
    opt.record_trace = true;
    const auto a = optimize_position(zone, s, p, config, opt);
    const auto b = optimize_position(zone, s, p, config, opt);
    EXPECT_EQ(a.uav_position, b.uav_position);
    EXPECT_EQ(a.served, b.served);
    EXPECT_EQ(a.fitness, b.fitness);
    EXPECT_TRUE(a.feasible);
    EXPECT_FALSE(a.trace.empty());
    EXPECT_LE(a.trace.size(), config.max_iterations + 1);

    // Soundness: the independent validator agrees with the feasible flag.
    std::vector<std::vector<std::size_t>> groups{members};
    const auto d = make_deployment(groups, {a.uav_position}, s, p);
    EXPECT_TRUE(validate_deployment(d, s, p).passed()) << "seed " << seed;
  }
}

TEST(Search, TraceIsMonotone) {
  const ChannelParams p;
  const auto s = square_scenario(100, {{20, 20}, {80, 30}, {40, 70}}, 13e6);
  const auto g = build_geometry(s, p);
  const std::vector<std::size_t> members{0, 1, 2};
  const auto zone = make_zone(members, *zone_witness(members, g, s.venue), g);
  PositionSearchOptions opt;
  opt.record_trace = true;
  const auto r = search_position(zone, s, p, SwarmConfig{}, opt);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i].gbest_fitness, r.trace[i - 1].gbest_fitness);
}

TEST(Search, PinnedAltitudeStaysPinned) {
  const ChannelParams p;
  const auto s = square_scenario(100, {{20, 20}, {80, 80}}, 6.5e6);
  const auto g = build_geometry(s, p);
  const auto zone = make_zone({0, 1}, {50, 50, 60}, g);
  PositionSearchOptions opt;
  opt.altitude = 20.0;
  opt.snap_to_zone = false;
  const auto r = search_position(zone, s, p, SwarmConfig{}, opt);
  EXPECT_EQ(r.uav_position.z, 20.0);
}

TEST(Search, InfeasibleZoneThrows) {
  const ChannelParams p;
  const auto s = square_scenario(500, {{0, 0}, {500, 500}}, 52e6);
  const auto g = build_geometry(s, p);
  const auto zone = make_zone({0, 1}, {250, 250, 60}, g);
  EXPECT_FALSE(search_position(zone, s, p, SwarmConfig{}).feasible);
  EXPECT_THROW(optimize_position(zone, s, p, SwarmConfig{}), InfeasibleZoneError);
}
