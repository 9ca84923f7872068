#include "windward/deadreckon.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "windward/detail/text.hpp"

namespace windward {

Path integrate_path(const FlightRecord& record) {
  validate_record(record);
  const double dt = record.meta.sample_dt;
  Path path;
  path.points.reserve(record.size());
  double north = 0.0;
  double east = 0.0;
  for (const auto& s : record.telemetry) {
    path.points.push_back(PathPoint{s.t, north, east, s.height_m});
    north += s.x_speed_ms * dt;
    east += s.y_speed_ms * dt;
  }
  const auto& last = record.telemetry.back();
  path.end = PathPoint{last.t + dt, north, east, last.height_m};
  return path;
}

ReversedSeries reverse_series(const FlightRecord& record) {
  if (record.empty()) throw InvalidInputError("record has no samples");
  ReversedSeries out;
  out.sample_dt = record.meta.sample_dt;
  out.telemetry.assign(record.telemetry.rbegin(), record.telemetry.rend());
  out.wind.assign(record.wind.rbegin(), record.wind.rend());
  return out;
}

ArrivalError arrival_error(double end_north, double end_east,
                           double takeoff_north, double takeoff_east) {
  ArrivalError err;
  err.x_err_m = end_north - takeoff_north;
  err.y_err_m = end_east - takeoff_east;
  err.magnitude_m = std::hypot(err.x_err_m, err.y_err_m);
  return err;
}

void write_path_csv(const Path& path, std::ostream& out) {
  out << "time_s,north_m,east_m,height_m\n";
  for (const auto& p : path.points) {
    out << detail::format_double(p.t) << ',' << detail::format_double(p.north_m)
        << ',' << detail::format_double(p.east_m) << ','
        << detail::format_double(p.height_m) << '\n';
  }
  if (!out) throw IoError("failed to write path CSV");
}

}  // namespace windward
