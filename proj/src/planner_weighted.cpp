#include "windward/planner_weighted.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "windward/detail/text.hpp"

namespace windward {

WeightedParams WeightedParams::from_beta(double beta) {
  WeightedParams p;
  p.beta = beta;
  p.alpha = 1.0 - beta;
  p.validate();
  return p;
}

void WeightedParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0.0 ||
      beta < 0.0) {
    throw ConfigError("alpha and beta must be finite and non-negative");
  }
  if (std::abs(alpha + beta - 1.0) > 1e-9) {
    throw ConfigError("alpha + beta must equal 1");
  }
  if (!(zero_eps >= 0.0) || !(ratio_clamp > 0.0)) {
    throw ConfigError("zero_eps must be >= 0 and ratio_clamp > 0");
  }
}

double weighted_step(double speed_f, double north_rf, double north_rb,
                     const WeightedParams& params) {
  if (std::abs(north_rf) < params.zero_eps) return speed_f;
  const double ratio =
      std::clamp(north_rb / north_rf, -params.ratio_clamp, params.ratio_clamp);
  const double factor = params.minus_form ? params.alpha - params.beta * ratio
                                          : params.alpha + params.beta * ratio;
  return speed_f * factor;
}

WeightedPlanner::WeightedPlanner(const FlightRecord& record,
                                 WeightedParams params)
    : series_(reverse_series(record)), params_(params) {
  params_.validate();
}

BackwardCommand WeightedPlanner::next(const WindSample& live_wind,
                                      Angle live_yaw) {
  if (done()) {
    throw PlanError("planner exhausted at step " + std::to_string(step_));
  }
  const TelemetrySample& fwd = series_.telemetry[step_];
  const TrueWind stored = to_true_north_east(series_.wind[step_], fwd.yaw);
  const TrueWind live = to_true_north_east(live_wind, live_yaw);

  BackwardCommand cmd;
  cmd.x_cmd_ms =
      -weighted_step(fwd.x_speed_ms, stored.north_r, live.north_r, params_);
  cmd.y_cmd_ms =
      -weighted_step(fwd.y_speed_ms, stored.east_r, live.east_r, params_);
  cmd.duration_s = series_.sample_dt;
  cmd.target_height_m = fwd.height_m;
  ++step_;
  return cmd;
}

std::vector<BackwardCommand> plan_backward_weighted(
    const FlightRecord& record,
    const std::vector<std::pair<WindSample, Angle>>& live_wind,
    const WeightedParams& params) {
  WeightedPlanner planner(record, params);
  std::vector<BackwardCommand> commands;
  commands.reserve(planner.total_steps());
  while (!planner.done()) {
    const std::size_t i = planner.step();
    if (i >= live_wind.size()) {
      throw PlanError("live wind stream ended at step " + std::to_string(i) +
                      " of " + std::to_string(planner.total_steps()));
    }
    commands.push_back(planner.next(live_wind[i].first, live_wind[i].second));
  }
  return commands;
}

void write_commands_csv(const std::vector<BackwardCommand>& commands,
                        std::ostream& out) {
  out << "step,x_cmd_ms,y_cmd_ms,height_m\n";
  for (std::size_t i = 0; i < commands.size(); ++i) {
    out << i << ',' << detail::format_double(commands[i].x_cmd_ms) << ','
        << detail::format_double(commands[i].y_cmd_ms) << ','
        << detail::format_double(commands[i].target_height_m) << '\n';
  }
  if (!out) throw IoError("failed to write commands CSV");
}

}  // namespace windward
