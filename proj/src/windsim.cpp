#include "windward/windsim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "windward/detail/text.hpp"

namespace windward {

namespace {

// Seed salts keeping the independent random streams of one simulation apart.
constexpr std::uint64_t kSaltMeanReverting = 0x77696e64;  // wind process noise
constexpr std::uint64_t kSaltGustBase = 0x67757374;       // per-segment gusts
constexpr std::uint64_t kSaltGamma = 0x67616d6d;          // gamma scaling

Vec2 cap_magnitude(Vec2 w, double cap) {
  const double mag = std::hypot(w.north, w.east);
  if (mag > cap && mag > 0.0) {
    const double k = cap / mag;
    w.north *= k;
    w.east *= k;
  }
  return w;
}

Vec2 gust_offset(const WindField& field, long segment) {
  detail::Rng rng(detail::mix_seed(
      field.seed, kSaltGustBase + static_cast<std::uint64_t>(segment)));
  Vec2 offset;
  offset.north =
      detail::uniform(rng, -field.gust_amplitude, field.gust_amplitude);
  offset.east =
      detail::uniform(rng, -field.gust_amplitude, field.gust_amplitude);
  return offset;
}

void validate_field(const WindField& field) {
  if (!(field.magnitude_cap > 0.0)) {
    throw ConfigError("wind magnitude cap must be positive");
  }
  if (field.model == WindModel::kPiecewiseGust) {
    if (!(field.gust_period_s > 0.0)) {
      throw ConfigError("gust period must be positive");
    }
    if (field.gust_amplitude < 0.0) {
      throw ConfigError("gust amplitude must be non-negative");
    }
  }
  if (field.model == WindModel::kMeanReverting) {
    if (!(field.process_dt > 0.0)) {
      throw ConfigError("process step must be positive");
    }
    if (field.reversion_rate < 0.0 || field.noise_scale < 0.0) {
      throw ConfigError("reversion rate and noise scale must be non-negative");
    }
  }
}

}  // namespace

WindSampler::WindSampler(const WindField& field) : field_(field) {
  validate_field(field_);
  reset();
}

void WindSampler::reset() {
  state_ = field_.init;
  tick_ = 0;
  rng_.seed(detail::mix_seed(field_.seed, kSaltMeanReverting));
}

// One mean-reverting step per process_dt tick:
//   x_{k+1} = x_k + theta * (mu - x_k) * dt + sigma * sqrt(dt) * xi_k
void WindSampler::advance_to(long tick) {
  const double dt = field_.process_dt;
  const double pull = std::clamp(field_.reversion_rate * dt, 0.0, 1.0);
  const double shake = field_.noise_scale * std::sqrt(dt);
  while (tick_ < tick) {
    const double xi_n = detail::gaussian(rng_);
    const double xi_e = detail::gaussian(rng_);
    state_.north += pull * (field_.mean.north - state_.north) + shake * xi_n;
    state_.east += pull * (field_.mean.east - state_.east) + shake * xi_e;
    ++tick_;
  }
}

Vec2 WindSampler::at(double t) {
  if (t < 0.0) throw InvalidInputError("wind sample time must be >= 0");
  switch (field_.model) {
    case WindModel::kConstant:
      return cap_magnitude(field_.mean, field_.magnitude_cap);
    case WindModel::kPiecewiseGust: {
      const long segment = static_cast<long>(
          std::floor(t / field_.gust_period_s + 1e-9));
      const Vec2 offset = gust_offset(field_, segment);
      return cap_magnitude(
          Vec2{field_.mean.north + offset.north, field_.mean.east + offset.east},
          field_.magnitude_cap);
    }
    case WindModel::kMeanReverting: {
      const long tick = static_cast<long>(std::floor(t / field_.process_dt + 1e-9));
      if (tick < tick_) reset();
      advance_to(tick);
      return cap_magnitude(state_, field_.magnitude_cap);
    }
  }
  throw ConfigError("unknown wind model");
}

Vec2 sample_wind(const WindField& field, double t) {
  WindSampler sampler(field);
  return sampler.at(t);
}

void validate_script(const FlightScript& script, const PlantConfig& plant) {
  if (script.legs.empty()) throw ConfigError("flight script has no legs");
  if (!(plant.sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
  if (plant.compensation < 0.0 || plant.compensation > 1.0) {
    throw ConfigError("compensation must be in [0, 1]");
  }
  if (!(plant.max_speed_ms > 0.0)) {
    throw ConfigError("max speed must be positive");
  }
  if (!(plant.climb_rate_ms >= 0.0)) {
    throw ConfigError("climb rate must be non-negative");
  }
  double north = 0.0;
  double east = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < script.legs.size(); ++i) {
    const auto& leg = script.legs[i];
    if (!(leg.duration_s > 0.0)) {
      throw ConfigError("leg " + std::to_string(i) +
                        ": duration must be positive");
    }
    if (leg.target_height_m < 0.0) {
      throw ConfigError("leg " + std::to_string(i) + ": negative height");
    }
    const double cmd = std::hypot(leg.velocity_cmd.north, leg.velocity_cmd.east);
    if (cmd > plant.max_speed_ms + 1e-9) {
      throw ConfigError("leg " + std::to_string(i) +
                        ": commanded speed exceeds plant max of " +
                        detail::format_double(plant.max_speed_ms) + " m/s");
    }
    north += leg.velocity_cmd.north * leg.duration_s;
    east += leg.velocity_cmd.east * leg.duration_s;
    worst = std::max(worst, std::hypot(north, east));
  }
  if (worst > script.radius_limit_m + 1e-9) {
    throw ConfigError("script leaves the " +
                      detail::format_double(script.radius_limit_m) +
                      " m radius limit (reaches " +
                      detail::format_double(worst) + " m)");
  }
}

SimResult simulate(const FlightScript& script, const WindField& field,
                   const PlantConfig& plant) {
  validate_script(script, plant);
  WindSampler sampler(field);
  const double dt = plant.sample_dt;

  double total_s = 0.0;
  for (const auto& leg : script.legs) total_s += leg.duration_s;
  const long ticks = std::max(1L, std::lround(total_s / dt));

  SimResult out;
  out.record.meta.sample_dt = dt;
  out.record.meta.flight_id = "sim";
  out.record.telemetry.reserve(ticks);
  out.record.wind.reserve(ticks);
  out.truth.positions.reserve(ticks);
  out.truth.true_wind.reserve(ticks);

  double north = 0.0;
  double east = 0.0;
  double height = 0.0;
  Angle yaw;  // holds its last value while hovering
  std::size_t leg_index = 0;
  double leg_end = script.legs[0].duration_s;

  for (long k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    while (t >= leg_end - 1e-9 && leg_index + 1 < script.legs.size()) {
      ++leg_index;
      leg_end += script.legs[leg_index].duration_s;
    }
    const FlightLeg& leg = script.legs[leg_index];
    const Vec2 w = sampler.at(t);

    const double residual = 1.0 - plant.compensation;
    Vec2 v_ground{leg.velocity_cmd.north + residual * w.north,
                  leg.velocity_cmd.east + residual * w.east};
    const double speed = std::hypot(v_ground.north, v_ground.east);
    if (speed > plant.max_speed_ms) {
      const double k_clamp = plant.max_speed_ms / speed;
      v_ground.north *= k_clamp;
      v_ground.east *= k_clamp;
    }

    if (leg.yaw_policy == YawPolicy::kFixed) {
      yaw = normalize_angle(leg.fixed_yaw_deg);
    } else if (speed > 1e-9) {
      yaw = normalize_angle(std::atan2(v_ground.east, v_ground.north) *
                            (180.0 / M_PI));
    }

    out.truth.positions.push_back(PathPoint{t, north, east, height});
    out.truth.true_wind.push_back(w);

    TelemetrySample s;
    s.t = t;
    s.x_speed_ms = v_ground.north;
    s.y_speed_ms = v_ground.east;
    s.height_m = height;
    s.yaw = yaw;
    out.record.telemetry.push_back(s);

    // Anemometer model: the from-direction true wind seen by the sensor is
    // -w, plus the drone's own velocity when the sensor reads apparent wind.
    const double kappa = plant.apparent_wind_sensing ? 1.0 : 0.0;
    const TrueWind sensed{kappa * v_ground.north - w.north,
                          kappa * v_ground.east - w.east};
    out.record.wind.push_back(to_body_frame(sensed, yaw, t));

    north += v_ground.north * dt;
    east += v_ground.east * dt;
    const double dh = leg.target_height_m - height;
    const double max_dh = plant.climb_rate_ms * dt;
    height += std::clamp(dh, -max_dh, max_dh);
  }

  const auto& last = out.record.telemetry.back();
  out.truth.end = PathPoint{last.t + dt, north, east, height};
  return out;
}

FlightRecord apply_gamma(const FlightRecord& record, double lo, double hi,
                         std::uint64_t seed) {
  if (!(lo > 0.0) || lo > hi) {
    throw InvalidInputError("gamma range requires 0 < lo <= hi");
  }
  validate_record(record);
  FlightRecord out = record;
  detail::Rng rng(detail::mix_seed(seed, kSaltGamma));
  for (auto& w : out.wind) {
    const double factor = detail::uniform(rng, lo, hi);
    w.u *= factor;
    w.v *= factor;
  }
  return out;
}

}  // namespace windward
