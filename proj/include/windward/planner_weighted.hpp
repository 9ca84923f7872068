#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "windward/deadreckon.hpp"
#include "windward/logstore.hpp"

// Backward phase, weighted-proportion method: retrace the reversed forward
// route, rescaling each stored speed by a blend of itself and the ratio of
// live backward wind to stored forward wind:
//
//   speed_b = speed_f * (alpha + beta * north_rb / north_rf)
//
// With alpha + beta = 1 and backward wind equal to forward wind the factor
// is exactly 1, so the retrace is exact. Negating the rescaled speeds turns
// the reversed forward legs into homeward commands.

namespace windward {

struct WeightedParams {
  double alpha = 0.90;
  double beta = 0.10;
  // Study switch: use alpha - beta * ratio instead of alpha + beta * ratio.
  // The plus form is the default; it is the one that retraces exactly under
  // equal winds.
  bool minus_form = false;
  double zero_eps = 1e-6;    // |forward wind| below this skips the ratio
  double ratio_clamp = 10.0; // |ratio| bound against near-zero denominators

  static WeightedParams from_beta(double beta);

  /// Throws ConfigError unless alpha, beta >= 0 and alpha + beta = 1.
  void validate() const;
};

/// One backward step command in the true frame.
struct BackwardCommand {
  double x_cmd_ms = 0.0;  // north
  double y_cmd_ms = 0.0;  // east
  double duration_s = 0.0;
  double target_height_m = 0.0;
};

/// The per-axis rescaling rule. Zero forward wind (within zero_eps) keeps
/// the forward speed unchanged; otherwise the wind ratio is clamped to
/// +/- ratio_clamp and blended per the params.
double weighted_step(double speed_f, double north_rf, double north_rb,
                     const WeightedParams& params);

/// Streaming planner: one emitted command per live wind sample, walking the
/// record's series back to front. Heights are replayed in reverse.
class WeightedPlanner {
 public:
  WeightedPlanner(const FlightRecord& record, WeightedParams params);

  std::size_t total_steps() const { return series_.telemetry.size(); }
  std::size_t step() const { return step_; }
  bool done() const { return step_ >= total_steps(); }

  /// Consume the live backward wind for this step (body frame, plus the
  /// drone's current yaw) and emit the command. Throws PlanError past the
  /// last step.
  BackwardCommand next(const WindSample& live_wind, Angle live_yaw);

 private:
  ReversedSeries series_;
  WeightedParams params_;
  std::size_t step_ = 0;
};

/// Batch form: plan the whole backward route against a pre-recorded live
/// wind stream. Throws PlanError naming the step index if the stream is
/// shorter than the record.
std::vector<BackwardCommand> plan_backward_weighted(
    const FlightRecord& record,
    const std::vector<std::pair<WindSample, Angle>>& live_wind,
    const WeightedParams& params);

/// Commands as CSV `step,x_cmd_ms,y_cmd_ms,height_m`.
void write_commands_csv(const std::vector<BackwardCommand>& commands,
                        std::ostream& out);

}  // namespace windward
