#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uavplan/geometry.hpp"

namespace uavplan {

/// How a UAV splits its spectrum among the UEs it serves.
///   fixed      - every UE gets its nominal bandwidth_hz.
///   demand_fit - every UE gets the smallest 1 kHz multiple (up to bandwidth_hz)
///                that meets its demand at the UAV's final position.
enum class BandwidthPolicy { fixed, demand_fit };

std::string_view to_string(BandwidthPolicy policy);
/// Accepts "fixed" and "demand-fit". Throws std::invalid_argument otherwise.
BandwidthPolicy parse_bandwidth_policy(std::string_view text);

inline constexpr double kChannelWidthHz = 20e6;
inline constexpr double kDefaultUavBandwidthHz = 160e6;

struct UserEquipment {
  Point3 position;
  double demand_bps = 0.0;
  /// Nominal (fixed) or ceiling (demand-fit) bandwidth for this UE.
  double bandwidth_hz = kChannelWidthHz;

  friend bool operator==(const UserEquipment&, const UserEquipment&) = default;
};

struct Scenario {
  std::string label;
  std::uint64_t seed = 0;
  FeasibleBox venue;
  std::vector<UserEquipment> ues;
  double b_max_hz = kDefaultUavBandwidthHz;
  BandwidthPolicy bandwidth_policy = BandwidthPolicy::demand_fit;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  [[nodiscard]] std::size_t size() const { return ues.size(); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Some UEs cannot be served from anywhere inside the feasible box.
class UnservableError : public std::runtime_error {
 public:
  explicit UnservableError(std::vector<std::size_t> ue_indices);
  [[nodiscard]] const std::vector<std::size_t>& ue_indices() const { return ues_; }

 private:
  std::vector<std::size_t> ues_;
};

/// Capacity cannot be met even by dedicating one UAV per UE.
class CapacityDeadlockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uavplan
