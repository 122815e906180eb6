#include <gtest/gtest.h>

#include <cmath>

#include "uavplan/channel.hpp"

using namespace uavplan;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Units, DbmAndDbConversions) {
  EXPECT_DOUBLE_EQ(dbm_to_watt(20.0), 0.1);
  EXPECT_DOUBLE_EQ(dbm_to_watt(30.0), 1.0);
  EXPECT_NEAR(watt_to_dbm(0.1), 20.0, 1e-12);
  EXPECT_DOUBLE_EQ(db_to_linear(20.0), 100.0);
  EXPECT_NEAR(linear_to_db(db_to_linear(1.0)), 1.0, 1e-12);
  EXPECT_NEAR(noise_density_from_floor(-85.0, 20e6), std::pow(10.0, -11.5) / 20e6, 1e-30);
}

TEST(ChannelParams, DefaultsMatchRadioTable) {
  const ChannelParams p;
  EXPECT_EQ(p.carrier_frequency_hz, 5.25e9);
  EXPECT_DOUBLE_EQ(p.tx_power_w, 0.1);
  EXPECT_EQ(p.c1, 9.6);
  EXPECT_EQ(p.c2, 0.28);
  EXPECT_EQ(p.los_threshold, 0.9);
  EXPECT_NO_THROW(p.validate());
}

TEST(ChannelParams, FreeSpaceConstant) {
  // 40-digit reference: (c / (4 pi f))^2 at 5.25 GHz.
  EXPECT_LT(rel(1.0 / ChannelParams{}.free_space_constant(), 2.064919240686966e-5), 1e-13);
}

TEST(ChannelParams, ThresholdElevationGivesThresholdProbability) {
  const ChannelParams p;
  EXPECT_LT(rel(p.threshold_elevation_deg(), 25.52495598503575), 1e-13);
  EXPECT_NEAR(los_probability_at(p.threshold_elevation_deg(), p), 0.9, 1e-14);
}

TEST(ChannelParams, ValidateRejectsBadValues) {
  ChannelParams p;
  p.los_threshold = 1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.mu_nlos = 0.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.tx_power_w = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Elevation, RightAngleAndDomain) {
  EXPECT_DOUBLE_EQ(elevation_deg({0, 0, 0}, {0, 0, 20}), 90.0);
  EXPECT_NEAR(elevation_deg({0, 0, 0}, {10, 0, 10}), 45.0, 1e-12);
  EXPECT_THROW(elevation_deg({1, 2, 3}, {1, 2, 3}), ChannelDomainError);
  EXPECT_THROW(elevation_deg({0, 0, 5}, {10, 0, 5}), ChannelDomainError);
  EXPECT_THROW(elevation_deg({0, 0, 5}, {0, 0, 1}), ChannelDomainError);
}

TEST(LosProbability, OverheadIsNearlyOne) {
  const ChannelParams p;
  EXPECT_NEAR(1.0 - los_probability({0, 0, 0}, {0, 0, 50}, p), 1.6048478e-9, 1e-15);
}

TEST(LosProbability, IncreasesWithElevation) {
  const ChannelParams p;
  double last = 0.0;
  for (double theta = 0.5; theta <= 90.0; theta += 0.5) {
    const double e = los_probability_at(theta, p);
    EXPECT_GT(e, last);
    EXPECT_LT(e, 1.0);
    last = e;
  }
}

TEST(LinkRate, OverheadReference) {
  const ChannelParams p;
  EXPECT_LT(rel(link_rate({0, 0, 0}, {0, 0, 20}, 20e6, p), 206835057.0328041604756), 1e-12);
}

TEST(LinkRate, DecreasesWithDistanceAtFixedElevation) {
  const ChannelParams p;
  double last = std::numeric_limits<double>::infinity();
  for (double s = 1.0; s < 200.0; s *= 1.5) {
    const double r = link_rate({0, 0, 0}, {s, 0, s}, 20e6, p);
    EXPECT_LT(r, last);
    last = r;
  }
}

TEST(LinkRate, EvaluateLinkAgreesWithParts) {
  const ChannelParams p;
  const Point3 ue{3, 4, 0}, uav{30, -20, 45};
  const auto link = evaluate_link(ue, uav, 10e6, p);
  EXPECT_EQ(link.rate, link_rate(ue, uav, 10e6, p));
  EXPECT_EQ(link.gain, channel_gain(ue, uav, p));
  EXPECT_EQ(link.p_los, los_probability(ue, uav, p));
  EXPECT_DOUBLE_EQ(link.p_los + link.p_nlos, 1.0);
  EXPECT_THROW(link_rate(ue, uav, 0.0, p), ChannelDomainError);
}

TEST(ServiceDistance, References) {
  const ChannelParams p;
  EXPECT_LT(rel(max_service_distance(6.5e6, 20e6, p), 481.8065826383843), 1e-12);
  EXPECT_LT(rel(max_service_distance(52e6, 20e6, p), 107.6332767371967), 1e-12);
}

TEST(ServiceDistance, DesignRateAtRadiusEqualsDemand) {
  const ChannelParams p;
  for (double demand : {6.5e6, 13e6, 26e6, 52e6}) {
    const double d = max_service_distance(demand, 20e6, p);
    const double gain = channel_gain_at(d, p.los_threshold, p);
    EXPECT_LT(rel(rate_for_gain(gain, 20e6, p), demand), 1e-12);
  }
}

TEST(ServiceDistance, ShrinksWithDemandAndRejectsBadInput) {
  const ChannelParams p;
  EXPECT_GT(max_service_distance(6.5e6, 20e6, p), max_service_distance(13e6, 20e6, p));
  EXPECT_THROW(max_service_distance(0.0, 20e6, p), ChannelDomainError);
  EXPECT_THROW(max_service_distance(1e6, -1.0, p), ChannelDomainError);
  EXPECT_THROW(max_service_distance(1e300, 1.0, p), ChannelDomainError);
}

TEST(MinBandwidth, SmallestGridValueMeetingDemand) {
  const ChannelParams p;
  const double gain = channel_gain({0, 0, 0}, {10, 10, 40}, p);
  const auto b = min_bandwidth_for_rate(6.5e6, gain, 20e6, p);
  ASSERT_TRUE(b);
  EXPECT_EQ(std::fmod(*b, 1e3), 0.0);
  EXPECT_GE(rate_for_gain(gain, *b, p), 6.5e6);
  EXPECT_LT(rate_for_gain(gain, *b - 1e3, p), 6.5e6);
}

TEST(MinBandwidth, CeilingFailureAndOffGridCeiling) {
  const ChannelParams p;
  const double far = channel_gain({0, 0, 0}, {400, 0, 120}, p);
  EXPECT_FALSE(min_bandwidth_for_rate(52e6, far, 20e6, p));
  const double near = channel_gain({0, 0, 0}, {0, 0, 10}, p);
  const auto b = min_bandwidth_for_rate(1e3, near, 500.0, p);
  ASSERT_TRUE(b);
  EXPECT_EQ(*b, 500.0);
}
