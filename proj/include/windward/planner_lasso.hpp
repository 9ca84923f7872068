#pragma once

#include <cstddef>

#include "windward/lasso.hpp"
#include "windward/logstore.hpp"
#include "windward/planner_weighted.hpp"

// Backward phase, regression-guided method: climb, then fly a straight line
// from the dead-reckoned attack point back to the origin. Each step the
// live wind is rotated into the true frame and the two trained models
// predict the achievable per-axis speeds; their magnitude sets the pace
// while the direction always aims at the origin.

namespace windward {

struct LassoPlanConfig {
  double height_raise_m = 20.0;   // climb before heading home
  double arrival_radius_m = 1.0;  // dead-reckoned termination threshold
  std::size_t max_steps = 10000;
  double speed_floor_ms = 0.5;    // pace never drops below this
  double sample_dt = 0.2;
  // Study switch: command the raw per-axis predictions (aimed home per
  // axis) instead of using the prediction as a straight-line pace.
  bool raw_axis_mode = false;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Streaming planner; one emitted command per live wind sample.
class LassoPlanner {
 public:
  /// start_north/east: dead-reckoned offset of the attack point from the
  /// origin. start_height: altitude there; commands target
  /// start_height + height_raise_m for the whole return.
  LassoPlanner(double start_north, double start_east, double start_height,
               LassoModel north_model, LassoModel east_model,
               LassoPlanConfig cfg);

  /// True once the dead-reckoned position is inside arrival_radius.
  bool done() const;
  std::size_t step() const { return step_; }

  /// Current dead-reckoned offset from the origin.
  double offset_north() const { return north_; }
  double offset_east() const { return east_; }

  /// Emit the next command. Throws PlanError carrying the final offset once
  /// max_steps is exhausted, and if called after done().
  BackwardCommand next(const WindSample& live_wind, Angle live_yaw);

 private:
  LassoModel north_model_;
  LassoModel east_model_;
  LassoPlanConfig cfg_;
  double north_ = 0.0;
  double east_ = 0.0;
  double target_height_ = 0.0;
  std::size_t step_ = 0;
  bool climbed_ = false;
};

}  // namespace windward
