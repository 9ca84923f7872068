#pragma once

#include <iosfwd>
#include <vector>

#include "windward/logstore.hpp"

// Forward-phase route reconstruction: integrate logged ground speeds into a
// position track, and produce the reversed series the backward planners
// retrace.

namespace windward {

struct PathPoint {
  double t = 0.0;
  double north_m = 0.0;
  double east_m = 0.0;
  double height_m = 0.0;
};

/// A dead-reckoned track. points[k] is the position at the instant sample k
/// was taken, so points[0] is the origin and there are exactly as many
/// points as record samples. `end` is the position one step past the last
/// sample, i.e. where the drone is once every logged speed has been flown.
struct Path {
  std::vector<PathPoint> points;
  PathPoint end;
};

/// A FlightRecord's telemetry and wind lists in reverse order. Timestamps
/// are kept verbatim (so they descend); consumers walk pairs by index.
struct ReversedSeries {
  std::vector<TelemetrySample> telemetry;
  std::vector<WindSample> wind;
  double sample_dt = 0.2;
};

struct ArrivalError {
  double x_err_m = 0.0;
  double y_err_m = 0.0;
  double magnitude_m = 0.0;
};

/// Euler-integrate the record's speeds at the log rate:
///   north_{k+1} = north_k + x_speed_k * dt
/// starting from the origin. Heights are copied from telemetry, not
/// integrated, since the log reports altitude directly.
Path integrate_path(const FlightRecord& record);

/// element i of output = element (n-1-i) of input, telemetry and wind alike.
ReversedSeries reverse_series(const FlightRecord& record);

/// Componentwise displacement end - takeoff, plus its Euclidean norm.
ArrivalError arrival_error(double end_north, double end_east,
                           double takeoff_north = 0.0,
                           double takeoff_east = 0.0);

/// Path as CSV `time_s,north_m,east_m,height_m`, one row per path point.
void write_path_csv(const Path& path, std::ostream& out);

}  // namespace windward
