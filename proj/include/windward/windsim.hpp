#pragma once

#include <cstdint>
#include <vector>

#include "windward/deadreckon.hpp"
#include "windward/detail/random.hpp"
#include "windward/logstore.hpp"

// Deterministic synthetic-flight generator: wind-field models, a drone
// kinematic plant with a configurable wind-compensating controller, and an
// anemometer sensor model. Produces a FlightRecord (what the drone would
// have logged) plus the GroundTruth (where it actually was), so planners
// can be evaluated in closed loop.
//
// Everything here is a pure function of its inputs plus a 64-bit seed; the
// random generator and all value mappings are pinned (see detail/random.hpp)
// so a seed reproduces bit-identical outputs anywhere.

namespace windward {

struct Vec2 {
  double north = 0.0;
  double east = 0.0;
};

enum class WindModel {
  kConstant,       // always the mean vector
  kPiecewiseGust,  // mean plus a per-segment uniform gust offset
  kMeanReverting,  // discretized first-order mean-reverting process
};

/// A wind field over time. Vectors are physical air velocity in the true
/// frame ("to" direction): north = +2 means air moving northward at 2 m/s.
/// The anemometer model converts to the from-direction convention used by
/// TrueWind when producing logged readings.
struct WindField {
  WindModel model = WindModel::kConstant;
  Vec2 mean;                     // m/s
  double gust_amplitude = 0.0;   // max |offset| per component, piecewise-gust
  double gust_period_s = 5.0;    // gust segment duration
  double reversion_rate = 0.5;   // theta, mean-reverting
  double noise_scale = 0.0;      // sigma, mean-reverting
  Vec2 init;                     // mean-reverting initial state
  double process_dt = 0.2;       // mean-reverting internal step, seconds
  double magnitude_cap = 25.0;   // m/s; sampled wind is scaled down to this
  std::uint64_t seed = 0;
};

/// Walks a WindField in time. Sequential calls with non-decreasing t are
/// O(1) amortized; a backward jump replays from t = 0 (same sequence, the
/// field is deterministic in (parameters, seed, t)).
class WindSampler {
 public:
  explicit WindSampler(const WindField& field);

  Vec2 at(double t);

 private:
  void reset();
  void advance_to(long tick);

  WindField field_;
  Vec2 state_;
  long tick_ = 0;
  detail::Rng rng_;
};

/// One-shot sample, deterministic in (field, t). Equivalent to
/// WindSampler(field).at(t); prefer the sampler inside loops.
Vec2 sample_wind(const WindField& field, double t);

/// Drone plant parameters. `compensation` is the fraction of the true wind
/// the autopilot cancels: ground velocity = command + (1 - c) * wind,
/// clamped to max_speed_ms.
struct PlantConfig {
  double compensation = 0.9;          // c in [0, 1]
  double max_speed_ms = 20.0;         // ground-speed clamp
  bool apparent_wind_sensing = false; // anemometer sees wind relative to the moving drone
  double sample_dt = 0.2;             // seconds per tick
  double climb_rate_ms = 4.0;         // vertical speed toward target height
};

enum class YawPolicy {
  kFaceVelocity,  // nose follows the ground-velocity direction
  kFixed,
};

struct FlightLeg {
  Vec2 velocity_cmd;            // commanded true-frame velocity, m/s
  double duration_s = 0.0;
  double target_height_m = 0.0;
  YawPolicy yaw_policy = YawPolicy::kFaceVelocity;
  double fixed_yaw_deg = 0.0;
};

struct FlightScript {
  std::vector<FlightLeg> legs;
  double radius_limit_m = 300.0;  // line-of-sight rule
};

/// Ground truth of one simulated flight, on the same grid as the record:
/// positions[k] is where the drone was at the instant of sample k (so
/// positions[0] is the takeoff point) and true_wind[k] is the physical
/// air velocity during tick k. `end` is the position after the last tick.
struct GroundTruth {
  std::vector<PathPoint> positions;
  PathPoint end;
  std::vector<Vec2> true_wind;
};

struct SimResult {
  FlightRecord record;
  GroundTruth truth;
};

/// Throws ConfigError when a leg is non-positive in duration, commands a
/// speed beyond the plant clamp, or the wind-free trajectory leaves the
/// script's radius limit.
void validate_script(const FlightScript& script, const PlantConfig& plant);

/// Run the plant over the script:
///   v_ground = clamp(v_cmd + (1 - c) * w_true, max_speed)
/// per tick; position integrates v_ground; the logged telemetry carries
/// v_ground (what the flight controller reports) and the logged anemometer
/// sample is the wind expressed in the body frame and in the from-direction
/// convention, with the drone's own motion added when apparent_wind_sensing
/// is on.
SimResult simulate(const FlightScript& script, const WindField& field,
                   const PlantConfig& plant);

/// Scale every logged WindSample's (u, v) by an independent uniform draw
/// in [lo, hi]; telemetry is untouched. Deterministic per seed.
FlightRecord apply_gamma(const FlightRecord& record, double lo, double hi,
                         std::uint64_t seed);

}  // namespace windward
