#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "uavplan/geometry.hpp"

namespace uavplan {

/// Raised when a link is evaluated outside the model's domain: zero distance,
/// or a UAV at or below the user's horizon.
class ChannelDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);
double db_to_linear(double db);
double linear_to_db(double linear);

/// Converts a total noise floor measured over `bandwidth_hz` into a spectral
/// density in W/Hz.
double noise_density_from_floor(double floor_dbm, double bandwidth_hz);

/// Radio and environment constants of the air-to-ground model. All fields are
/// linear SI units; dB/dBm conversions happen at the file boundary.
struct ChannelParams {
  static constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

  double carrier_frequency_hz = 5.25e9;
  double tx_power_w = 0.1;  // 20 dBm
  double tx_antenna_gain = 1.0;
  double rx_antenna_gain = 1.0;
  // -85 dBm noise floor over a 20 MHz channel.
  double noise_spectral_density = noise_density_from_floor(-85.0, 20e6);
  // Urban logistic LoS constants.
  double c1 = 9.6;
  double c2 = 0.28;
  // Excess attenuation factors: 1 dB (LoS) and 20 dB (NLoS).
  double mu_los = db_to_linear(1.0);
  double mu_nlos = db_to_linear(20.0);
  double los_threshold = 0.9;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  /// Free-space constant K0 = (4 pi f / c)^2.
  [[nodiscard]] double free_space_constant() const;

  /// Elevation (degrees) at which the LoS probability equals los_threshold.
  [[nodiscard]] double threshold_elevation_deg() const;

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

/// Everything known about one UE-UAV link.
struct LinkBudget {
  double distance = 0.0;       // m
  double elevation_deg = 0.0;  // degrees above the UE's horizon
  double p_los = 0.0;
  double p_nlos = 0.0;
  double gain = 0.0;       // linear
  double rate = 0.0;       // bit/s
  double bandwidth = 0.0;  // Hz
};

/// Elevation angle of `uav` seen from `ue`, in degrees. Throws ChannelDomainError
/// when the UAV is not strictly above the UE.
double elevation_deg(const Point3& ue, const Point3& uav);

/// Logistic LoS probability as a function of the elevation angle in degrees.
double los_probability_at(double elevation_deg, const ChannelParams& params);
double los_probability(const Point3& ue, const Point3& uav, const ChannelParams& params);

/// Average channel gain for a given distance and LoS probability.
double channel_gain_at(double distance, double p_los, const ChannelParams& params);
double channel_gain(const Point3& ue, const Point3& uav, const ChannelParams& params);

/// Shannon rate over `bandwidth_hz` for a given average gain.
double rate_for_gain(double gain, double bandwidth_hz, const ChannelParams& params);
double link_rate(const Point3& ue, const Point3& uav, double bandwidth_hz, const ChannelParams& params);

LinkBudget evaluate_link(const Point3& ue, const Point3& uav, double bandwidth_hz, const ChannelParams& params);

/// Largest UE-UAV distance at which `demand_bps` is still met over `bandwidth_hz`,
/// evaluated at the design LoS probability params.los_threshold.
double max_service_distance(double demand_bps, double bandwidth_hz, const ChannelParams& params);

/// Smallest bandwidth on a `grid_hz` lattice (capped at `ceiling_hz`) whose rate
/// at `gain` meets `demand_bps`. The ceiling itself is returned when it meets the
/// demand but the largest grid point below it does not. nullopt when even the
/// ceiling falls short.
std::optional<double> min_bandwidth_for_rate(double demand_bps, double gain, double ceiling_hz,
                                             const ChannelParams& params, double grid_hz = 1e3);

}  // namespace uavplan
