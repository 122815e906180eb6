#include "uavplan/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uavplan {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double noise_density_from_floor(double floor_dbm, double bandwidth_hz) {
  return dbm_to_watt(floor_dbm) / bandwidth_hz;
}

void ChannelParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("channel: ") + what);
  };
  require(std::isfinite(carrier_frequency_hz) && carrier_frequency_hz > 0, "carrier_frequency must be > 0");
  require(std::isfinite(tx_power_w) && tx_power_w > 0, "tx_power must be > 0");
  require(std::isfinite(tx_antenna_gain) && tx_antenna_gain > 0, "tx_antenna_gain must be > 0");
  require(std::isfinite(rx_antenna_gain) && rx_antenna_gain > 0, "rx_antenna_gain must be > 0");
  require(std::isfinite(noise_spectral_density) && noise_spectral_density > 0,
          "noise_spectral_density must be > 0");
  require(std::isfinite(c1) && c1 > 0, "c1 must be > 0");
  require(std::isfinite(c2) && c2 > 0, "c2 must be > 0");
  require(std::isfinite(mu_los) && mu_los >= 1, "mu_los must be >= 1");
  require(std::isfinite(mu_nlos) && mu_nlos >= mu_los, "mu_nlos must be >= mu_los");
  require(los_threshold > 0 && los_threshold < 1, "los_threshold must lie in (0, 1)");
}

double ChannelParams::free_space_constant() const {
  const double k = 4.0 * std::numbers::pi * carrier_frequency_hz / kSpeedOfLight;
  return k * k;
}

double ChannelParams::threshold_elevation_deg() const {
  // Solve 1 / (1 + c1 exp(-c2 (theta - c1))) = threshold for theta.
  const double odds = (1.0 - los_threshold) / los_threshold;
  return c1 - std::log(odds / c1) / c2;
}

double elevation_deg(const Point3& ue, const Point3& uav) {
  const double d = path_distance(ue, uav);
  if (!(d > 0.0)) throw ChannelDomainError("UE and UAV positions coincide");
  const double rise = uav.z - ue.z;
  if (!(rise > 0.0)) throw ChannelDomainError("UAV must be strictly above the UE");
  return (180.0 / std::numbers::pi) * std::atan2(rise, std::hypot(uav.x - ue.x, uav.y - ue.y));
}

double los_probability_at(double elevation, const ChannelParams& params) {
  return 1.0 / (1.0 + params.c1 * std::exp(-params.c2 * (elevation - params.c1)));
}

double los_probability(const Point3& ue, const Point3& uav, const ChannelParams& params) {
  return los_probability_at(elevation_deg(ue, uav), params);
}

double channel_gain_at(double distance, double p_los, const ChannelParams& params) {
  if (!(distance > 0.0)) throw ChannelDomainError("channel gain needs a positive distance");
  const double p_nlos = 1.0 - p_los;
  const double attenuation = p_los * params.mu_los + p_nlos * params.mu_nlos;
  return 1.0 / (params.free_space_constant() * distance * distance * attenuation);
}

double channel_gain(const Point3& ue, const Point3& uav, const ChannelParams& params) {
  const double p_los = los_probability(ue, uav, params);
  return channel_gain_at(path_distance(ue, uav), p_los, params);
}

double rate_for_gain(double gain, double bandwidth_hz, const ChannelParams& params) {
  if (!(bandwidth_hz > 0.0)) throw ChannelDomainError("bandwidth must be > 0");
  const double snr = params.tx_power_w * params.tx_antenna_gain * params.rx_antenna_gain * gain /
                     (params.noise_spectral_density * bandwidth_hz);
  return bandwidth_hz * std::log2(1.0 + snr);
}

double link_rate(const Point3& ue, const Point3& uav, double bandwidth_hz, const ChannelParams& params) {
  return rate_for_gain(channel_gain(ue, uav, params), bandwidth_hz, params);
}

LinkBudget evaluate_link(const Point3& ue, const Point3& uav, double bandwidth_hz, const ChannelParams& params) {
  LinkBudget link;
  link.distance = path_distance(ue, uav);
  link.elevation_deg = elevation_deg(ue, uav);
  link.p_los = los_probability_at(link.elevation_deg, params);
  link.p_nlos = 1.0 - link.p_los;
  link.gain = channel_gain_at(link.distance, link.p_los, params);
  link.bandwidth = bandwidth_hz;
  link.rate = rate_for_gain(link.gain, bandwidth_hz, params);
  return link;
}

double max_service_distance(double demand_bps, double bandwidth_hz, const ChannelParams& params) {
  if (!(demand_bps > 0.0) || !(bandwidth_hz > 0.0)) {
    throw ChannelDomainError("service distance needs positive demand and bandwidth");
  }
  const double spectral_efficiency = demand_bps / bandwidth_hz;
  const double snr_needed = std::expm1(spectral_efficiency * std::numbers::ln2);
  if (!std::isfinite(snr_needed) || !std::isfinite(spectral_efficiency)) {
    throw ChannelDomainError("demand/bandwidth ratio overflows the rate inversion");
  }
  const double eps = params.los_threshold;
  const double a = 1.0 / (params.free_space_constant() * (eps * params.mu_los + (1.0 - eps) * params.mu_nlos));
  const double numerator = a * params.tx_power_w * params.tx_antenna_gain * params.rx_antenna_gain;
  return std::sqrt(numerator / (params.noise_spectral_density * bandwidth_hz * snr_needed));
}

std::optional<double> min_bandwidth_for_rate(double demand_bps, double gain, double ceiling_hz,
                                             const ChannelParams& params, double grid_hz) {
  if (!(gain > 0.0) || !(ceiling_hz > 0.0)) return std::nullopt;
  auto meets = [&](double b) { return rate_for_gain(gain, b, params) >= demand_bps; };
  if (!meets(ceiling_hz)) return std::nullopt;

  const auto top = static_cast<long long>(std::floor(ceiling_hz / grid_hz));
  if (top < 1 || !meets(static_cast<double>(top) * grid_hz)) return ceiling_hz;
  if (meets(grid_hz)) return grid_hz;
  // Rate is increasing in bandwidth: invariant meets(hi) && !meets(lo).
  long long lo = 1;
  long long hi = top;
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    if (meets(static_cast<double>(mid) * grid_hz)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return static_cast<double>(hi) * grid_hz;
}

}  // namespace uavplan
