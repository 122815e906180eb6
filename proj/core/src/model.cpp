#include "uavplan/model.hpp"

#include <cmath>
#include <sstream>

namespace uavplan {

std::string_view to_string(BandwidthPolicy policy) {
  switch (policy) {
    case BandwidthPolicy::fixed:
      return "fixed";
    case BandwidthPolicy::demand_fit:
      return "demand-fit";
  }
  return "unknown";
}

BandwidthPolicy parse_bandwidth_policy(std::string_view text) {
  if (text == "fixed") return BandwidthPolicy::fixed;
  if (text == "demand-fit") return BandwidthPolicy::demand_fit;
  throw std::invalid_argument("bandwidth policy must be \"fixed\" or \"demand-fit\", got \"" +
                              std::string(text) + "\"");
}

void FeasibleBox::validate() const {
  for (int axis = 0; axis < 3; ++axis) {
    if (!std::isfinite(lower(axis)) || !std::isfinite(upper(axis))) {
      throw std::invalid_argument("feasible box bounds must be finite");
    }
    if (!(lower(axis) < upper(axis))) {
      static constexpr const char* kNames[] = {"x", "y", "z"};
      throw std::invalid_argument(std::string("feasible box requires min < max on axis ") + kNames[axis]);
    }
  }
}

void Scenario::validate() const {
  venue.validate();
  if (ues.empty()) throw std::invalid_argument("scenario has no UEs");
  if (!(b_max_hz > 0.0) || !std::isfinite(b_max_hz)) throw std::invalid_argument("b_max_hz must be > 0");
  for (std::size_t i = 0; i < ues.size(); ++i) {
    const auto& ue = ues[i];
    auto fail = [i](const std::string& what) {
      throw std::invalid_argument("ue " + std::to_string(i) + ": " + what);
    };
    if (!ue.position.finite()) fail("position must be finite");
    if (!(ue.demand_bps > 0.0) || !std::isfinite(ue.demand_bps)) fail("demand_bps must be > 0");
    if (!(ue.bandwidth_hz > 0.0) || !std::isfinite(ue.bandwidth_hz)) fail("bandwidth_hz must be > 0");
    if (ue.position.x < venue.x_min || ue.position.x > venue.x_max || ue.position.y < venue.y_min ||
        ue.position.y > venue.y_max) {
      fail("lies outside the venue footprint");
    }
    if (!(venue.z_min > ue.position.z)) fail("UAV altitude band must start above every UE");
  }
}

namespace {
std::string describe_unservable(const std::vector<std::size_t>& ues) {
  std::ostringstream out;
  out << "unservable UEs:";
  for (auto i : ues) out << ' ' << i;
  return out.str();
}
}  // namespace

UnservableError::UnservableError(std::vector<std::size_t> ue_indices)
    : std::runtime_error(describe_unservable(ue_indices)), ues_(std::move(ue_indices)) {}

}  // namespace uavplan
