#include "windward/frames.hpp"

#include <cmath>

namespace windward {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw InvalidInputError(std::string(what) + " must be finite");
  }
}

}  // namespace

Angle Angle::from_degrees(double deg) {
  require_finite(deg, "angle");
  double wrapped = deg - 360.0 * std::floor((deg + 180.0) / 360.0);
  // Rounding at huge magnitudes can land exactly on a bound; fold it back.
  if (wrapped >= 180.0) wrapped -= 360.0;
  if (wrapped < -180.0) wrapped += 360.0;
  return Angle(wrapped);
}

double wind_magnitude(double u, double v) {
  require_finite(u, "u");
  require_finite(v, "v");
  return std::hypot(u, v);
}

TrueWind to_true_north_east(const WindSample& wind, Angle yaw) {
  require_finite(wind.u, "u");
  require_finite(wind.v, "v");
  const double c = std::cos(yaw.radians());
  const double s = std::sin(yaw.radians());
  return TrueWind{c * wind.v - s * wind.u, s * wind.v + c * wind.u};
}

WindSample to_body_frame(const TrueWind& wind, Angle yaw, double t) {
  require_finite(wind.north_r, "north_r");
  require_finite(wind.east_r, "east_r");
  const double c = std::cos(yaw.radians());
  const double s = std::sin(yaw.radians());
  WindSample out;
  out.t = t;
  out.v = c * wind.north_r + s * wind.east_r;
  out.u = -s * wind.north_r + c * wind.east_r;
  return out;
}

Angle normalize_angle(double deg) { return Angle::from_degrees(deg); }

}  // namespace windward
