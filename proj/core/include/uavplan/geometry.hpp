#pragma once

#include <array>
#include <cmath>
#include <compare>

namespace uavplan {

/// A position in the local venue frame, in meters. z is height above ground.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Point3 operator*(double s, Point3 p) { return {s * p.x, s * p.y, s * p.z}; }
  friend constexpr bool operator==(const Point3&, const Point3&) = default;
  friend constexpr auto operator<=>(const Point3&, const Point3&) = default;

  [[nodiscard]] bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
  [[nodiscard]] double norm() const { return std::sqrt(x * x + y * y + z * z); }
  [[nodiscard]] constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  constexpr double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
};

/// Euclidean distance between two points. Total and symmetric.
inline double path_distance(const Point3& a, const Point3& b) { return (b - a).norm(); }

/// Axis-aligned region where UAVs may be placed: the venue footprint in x/y and
/// the permitted altitude band in z.
struct FeasibleBox {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  double z_min = 0.0, z_max = 0.0;

  [[nodiscard]] double lower(int axis) const { return axis == 0 ? x_min : (axis == 1 ? y_min : z_min); }
  [[nodiscard]] double upper(int axis) const { return axis == 0 ? x_max : (axis == 1 ? y_max : z_max); }
  [[nodiscard]] double extent(int axis) const { return upper(axis) - lower(axis); }
  [[nodiscard]] Point3 center() const {
    return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max), 0.5 * (z_min + z_max)};
  }

  [[nodiscard]] bool contains(const Point3& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max && p.z >= z_min && p.z <= z_max;
  }

  [[nodiscard]] Point3 clamp(const Point3& p) const {
    return {std::fmin(std::fmax(p.x, x_min), x_max), std::fmin(std::fmax(p.y, y_min), y_max),
            std::fmin(std::fmax(p.z, z_min), z_max)};
  }

  /// Throws std::invalid_argument unless min < max on every axis and all bounds are finite.
  void validate() const;

  friend bool operator==(const FeasibleBox&, const FeasibleBox&) = default;
};

}  // namespace uavplan
