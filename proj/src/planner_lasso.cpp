#include "windward/planner_lasso.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "windward/detail/text.hpp"

namespace windward {

void LassoPlanConfig::validate() const {
  if (height_raise_m < 0.0) throw ConfigError("height_raise must be >= 0");
  if (!(arrival_radius_m > 0.0)) {
    throw ConfigError("arrival_radius must be positive");
  }
  if (!(speed_floor_ms > 0.0)) {
    throw ConfigError("speed_floor must be positive");
  }
  if (!(sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
  if (max_steps == 0) throw ConfigError("max_steps must be positive");
}

LassoPlanner::LassoPlanner(double start_north, double start_east,
                           double start_height, LassoModel north_model,
                           LassoModel east_model, LassoPlanConfig cfg)
    : north_model_(north_model),
      east_model_(east_model),
      cfg_(cfg),
      north_(start_north),
      east_(start_east),
      target_height_(start_height + cfg.height_raise_m),
      climbed_(cfg.height_raise_m <= 0.0) {
  cfg_.validate();
  if (!std::isfinite(start_north) || !std::isfinite(start_east) ||
      !std::isfinite(start_height)) {
    throw InvalidInputError("start offset must be finite");
  }
}

bool LassoPlanner::done() const {
  return std::hypot(north_, east_) < cfg_.arrival_radius_m;
}

BackwardCommand LassoPlanner::next(const WindSample& live_wind,
                                   Angle live_yaw) {
  if (done()) {
    throw PlanError("planner already arrived at step " +
                    std::to_string(step_));
  }
  if (step_ >= cfg_.max_steps) {
    throw PlanError("no arrival after " + std::to_string(cfg_.max_steps) +
                    " steps; final offset (" + detail::format_double(north_) +
                    ", " + detail::format_double(east_) + ") m");
  }
  ++step_;

  BackwardCommand cmd;
  cmd.duration_s = cfg_.sample_dt;
  cmd.target_height_m = target_height_;
  if (!climbed_) {
    // Hover in place for the climb step; height tracking does the work.
    climbed_ = true;
    return cmd;
  }

  const TrueWind live = to_true_north_east(live_wind, live_yaw);
  const double pred_n = predict(north_model_, live.north_r);
  const double pred_e = predict(east_model_, live.east_r);
  const double dist = std::hypot(north_, east_);
  const double dt = cfg_.sample_dt;

  if (cfg_.raw_axis_mode) {
    // Per-axis homing at the predicted per-axis speeds, each axis capped so
    // it cannot overshoot the origin within one step.
    const double sx = std::min(std::abs(pred_n), std::abs(north_) / dt);
    const double sy = std::min(std::abs(pred_e), std::abs(east_) / dt);
    cmd.x_cmd_ms = (north_ > 0.0) ? -sx : sx;
    cmd.y_cmd_ms = (east_ > 0.0) ? -sy : sy;
  } else {
    double pace = std::max(cfg_.speed_floor_ms, std::hypot(pred_n, pred_e));
    pace = std::min(pace, dist / dt);  // no overshoot past the origin
    cmd.x_cmd_ms = -pace * north_ / dist;
    cmd.y_cmd_ms = -pace * east_ / dist;
  }

  north_ += cmd.x_cmd_ms * dt;
  east_ += cmd.y_cmd_ms * dt;
  return cmd;
}

}  // namespace windward
