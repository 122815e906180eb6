#include <benchmark/benchmark.h>

#include <numeric>

#include "uavplan/channel.hpp"
#include "uavplan/coverage.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/scenario.hpp"

using namespace uavplan;

namespace {

void BM_LinkRate(benchmark::State& state) {
  const ChannelParams params;
  Point3 uav{40.0, 25.0, 30.0};
  for (auto _ : state) {
    uav.x += 1e-9;
    benchmark::DoNotOptimize(link_rate({0.0, 0.0, 0.0}, uav, 20e6, params));
  }
}
BENCHMARK(BM_LinkRate);

void BM_MaxServiceDistance(benchmark::State& state) {
  const ChannelParams params;
  double demand = 52e6;
  for (auto _ : state) {
    demand += 1e-3;
    benchmark::DoNotOptimize(max_service_distance(demand, 20e6, params));
  }
}
BENCHMARK(BM_MaxServiceDistance);

// Witness search over the whole UE set of a Scenario C instance.
void BM_MinimizeDeficit(benchmark::State& state) {
  const Scenario s = generate_scenario(ScenarioKind::C, static_cast<std::size_t>(state.range(0)), 1);
  const auto geometry = build_geometry(s, ChannelParams{});
  std::vector<std::size_t> members(s.size());
  std::iota(members.begin(), members.end(), std::size_t{0});
  for (auto _ : state) benchmark::DoNotOptimize(minimize_deficit(members, geometry, s.venue));
}
BENCHMARK(BM_MinimizeDeficit)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

void BM_EnumerateZones(benchmark::State& state) {
  const Scenario s = generate_scenario(ScenarioKind::B, static_cast<std::size_t>(state.range(0)), 4);
  const auto geometry = build_geometry(s, ChannelParams{});
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_zones(geometry, s.venue));
}
BENCHMARK(BM_EnumerateZones)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

// Full plan per Scenario B venue size.
void BM_PlanScenarioB(benchmark::State& state) {
  const Scenario s = generate_scenario(ScenarioKind::B, static_cast<std::size_t>(state.range(0)), 1);
  const ChannelParams params;
  const SwarmConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(plan_deployment(s, params, config).deployment.uav_count);
}
BENCHMARK(BM_PlanScenarioB)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
