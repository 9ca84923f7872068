#pragma once

#include <cmath>

#include "windward/error.hpp"

// Core domain types shared by every other part of windward: angles, speed
// units, telemetry and anemometer samples, and the rotation between the
// drone's body frame and the true north/east frame.
//
// Conventions, fixed once here and honored everywhere:
//   * Angles are yaw in degrees, normalized to [-180, 180). Trig happens in
//     radians, but storage stays in degrees to match flight logs.
//   * The canonical internal speed unit is m/s. MPH exists only at the
//     ingestion boundary.
//   * TrueWind uses the "blowing from" convention: north_r = +10 means a
//     10 m/s wind blowing from north toward south.

namespace windward {

/// Exact miles-per-hour to meters-per-second factor.
inline constexpr double kMphToMs = 0.44704;

/// Yaw angle in degrees, always normalized to [-180, 180).
class Angle {
 public:
  Angle() = default;

  static Angle from_degrees(double deg);

  double degrees() const { return degrees_; }
  double radians() const { return degrees_ * (M_PI / 180.0); }

  Angle operator+(const Angle& other) const {
    return from_degrees(degrees_ + other.degrees_);
  }
  Angle operator-() const { return from_degrees(-degrees_); }

 private:
  explicit Angle(double normalized_deg) : degrees_(normalized_deg) {}
  double degrees_ = 0.0;
};

/// A speed with an explicit unit, for lossless conversion at ingestion.
class Speed {
 public:
  static Speed mph(double value) { return Speed(value * kMphToMs); }
  static Speed ms(double value) { return Speed(value); }

  double as_ms() const { return ms_; }
  double as_mph() const { return ms_ / kMphToMs; }

 private:
  explicit Speed(double ms) : ms_(ms) {}
  double ms_ = 0.0;
};

/// One row of flight telemetry. Speeds are ground speeds along the true
/// axes: x_speed_ms points north, y_speed_ms points east (+ = north/east
/// bound). Height is meters above the takeoff point.
struct TelemetrySample {
  double t = 0.0;  // seconds since flight start
  double x_speed_ms = 0.0;
  double y_speed_ms = 0.0;
  double height_m = 0.0;
  Angle yaw;
};

/// One anemometer reading in the drone's body frame: v along the nose,
/// u along the body east-of-nose axis.
struct WindSample {
  double t = 0.0;
  double u = 0.0;  // m/s
  double v = 0.0;  // m/s
};

/// Wind rotated into the true frame. Sign convention: a positive component
/// is wind blowing FROM that direction (north_r = 10 means air moving from
/// north toward south at 10 m/s).
struct TrueWind {
  double north_r = 0.0;  // m/s
  double east_r = 0.0;   // m/s
};

/// Wind power: sqrt(u^2 + v^2). Throws InvalidInputError on non-finite input.
double wind_magnitude(double u, double v);

/// Rotate a body-frame wind reading into the true frame using the drone's
/// yaw at the same instant. Pure rotation: magnitude is preserved.
TrueWind to_true_north_east(const WindSample& wind, Angle yaw);

/// Inverse of to_true_north_east: express a true-frame wind in the body
/// frame of a drone at the given yaw. `t` is carried through unchanged.
WindSample to_body_frame(const TrueWind& wind, Angle yaw, double t = 0.0);

/// Normalize an arbitrary finite degree value into [-180, 180).
Angle normalize_angle(double deg);

}  // namespace windward
