#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "windward/frames.hpp"

// Parsing, alignment, and persistence of flight + anemometer logs.
//
// Two raw CSV schemas come in (exact headers):
//   flight:     time_s,xSpeed_mph,ySpeed_mph,height_m,yaw_deg
//   anemometer: time_s,u_ms,v_ms
// Out comes a FlightRecord: both series resampled onto one uniform time
// grid, speeds already converted to m/s. Records persist as a versioned
// CSV with `# windward-record v1` up top and a CRC32 trailer, serialized
// with round-trip-safe number formatting so load(save(r)) == r exactly.

namespace windward {

struct RecordMeta {
  std::string flight_id;
  std::string takeoff_label;
  double sample_dt = 0.2;     // seconds between aligned samples
  std::string created_at;     // informational timestamp text
};

/// A flight's aligned telemetry + wind series on a uniform grid starting
/// at t = 0. telemetry[i] and wind[i] describe the same instant.
struct FlightRecord {
  RecordMeta meta;
  std::vector<TelemetrySample> telemetry;
  std::vector<WindSample> wind;

  std::size_t size() const { return telemetry.size(); }
  bool empty() const { return telemetry.empty(); }
};

/// Throws InvalidInputError unless the record is non-empty, equal-length,
/// uniformly spaced at meta.sample_dt, and finite throughout.
void validate_record(const FlightRecord& record);

/// Parse a flight telemetry CSV. Columns are matched by header name, any
/// order, extras ignored. Speeds convert MPH -> m/s; yaw is normalized.
/// Throws SchemaError (missing column), ParseError (bad row, with line
/// number), EmptyInputError (no data rows).
std::vector<TelemetrySample> parse_flight_csv(std::istream& in);

/// Parse an anemometer CSV. |u| and |v| above max_abs_ms fail the row.
std::vector<WindSample> parse_anemometer_csv(std::istream& in,
                                             double max_abs_ms = 75.0);

/// Resample both series onto the grid {0, dt, 2dt, ...} restricted to
/// their overlapping time interval, matching each grid point to the
/// nearest input sample within dt/2. Timestamps are rebased so the first
/// kept grid point becomes t = 0. Throws AlignmentError when the series
/// do not overlap or coverage has a gap.
FlightRecord align(const std::vector<TelemetrySample>& telemetry,
                   const std::vector<WindSample>& wind, double sample_dt = 0.2,
                   RecordMeta meta = {});

/// Serialize a record. Output is deterministic byte-for-byte.
void save_record(const FlightRecord& record, std::ostream& out);

/// Parse a record written by save_record, verifying version and checksum.
/// Throws FormatError on version or checksum mismatch.
FlightRecord load_record(std::istream& in);

}  // namespace windward
