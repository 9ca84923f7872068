#include "windward/logstore.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "windward/detail/crc32.hpp"
#include "windward/detail/text.hpp"

namespace windward {

namespace {

constexpr std::string_view kRecordMagic = "# windward-record v1";
constexpr std::string_view kRecordHeader =
    "time_s,x_speed_ms,y_speed_ms,height_m,yaw_deg,u_ms,v_ms";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(detail::trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(detail::trim(cell));
  return cells;
}

// Lines are significant if they are neither blank nor `#` comments.
bool is_data_line(const std::string& line) {
  const std::string t = detail::trim(line);
  return !t.empty() && t[0] != '#';
}

struct CsvTable {
  std::map<std::string, std::size_t> columns;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line_no, cells)
};

CsvTable read_csv(std::istream& in, const std::vector<std::string>& required) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!is_data_line(line)) continue;
    auto cells = split_csv(line);
    if (!saw_header) {
      for (std::size_t i = 0; i < cells.size(); ++i) table.columns[cells[i]] = i;
      for (const auto& name : required) {
        if (!table.columns.count(name)) {
          throw SchemaError("missing column '" + name + "'");
        }
      }
      saw_header = true;
    } else {
      table.rows.emplace_back(line_no, std::move(cells));
    }
  }
  if (!saw_header || table.rows.empty()) {
    throw EmptyInputError("no data rows");
  }
  return table;
}

double cell_value(const std::pair<std::size_t, std::vector<std::string>>& row,
                  const CsvTable& table, const std::string& column) {
  const std::size_t idx = table.columns.at(column);
  if (idx >= row.second.size()) {
    throw ParseError(row.first, "missing value for column '" + column + "'");
  }
  try {
    return detail::parse_double(row.second[idx]);
  } catch (const Error&) {
    throw ParseError(row.first, "bad number '" + row.second[idx] +
                                    "' in column '" + column + "'");
  }
}

// Index of the element of `times` nearest to t (earlier one on a tie).
template <typename Series>
std::size_t nearest_index(const Series& series, double t) {
  const auto cmp = [](const auto& s, double value) { return s.t < value; };
  auto it = std::lower_bound(series.begin(), series.end(), t, cmp);
  if (it == series.begin()) return 0;
  if (it == series.end()) return series.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - series.begin());
  const std::size_t lo = hi - 1;
  return (t - series[lo].t <= series[hi].t - t) ? lo : hi;
}

template <typename Series>
void require_strictly_increasing(const Series& series, const char* what) {
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i].t > series[i - 1].t)) {
      throw InvalidInputError(std::string(what) +
                              " timestamps must be strictly increasing");
    }
  }
}

void require_no_newline(const std::string& value, const char* what) {
  if (value.find('\n') != std::string::npos ||
      value.find('\r') != std::string::npos) {
    throw InvalidInputError(std::string(what) + " must not contain newlines");
  }
}

}  // namespace

void validate_record(const FlightRecord& record) {
  if (record.empty()) throw InvalidInputError("record has no samples");
  if (record.telemetry.size() != record.wind.size()) {
    throw InvalidInputError("telemetry and wind lengths differ");
  }
  if (!(record.meta.sample_dt > 0.0)) {
    throw InvalidInputError("sample_dt must be positive");
  }
  const double dt = record.meta.sample_dt;
  for (std::size_t i = 0; i < record.size(); ++i) {
    const auto& s = record.telemetry[i];
    const auto& w = record.wind[i];
    if (!std::isfinite(s.x_speed_ms) || !std::isfinite(s.y_speed_ms) ||
        !std::isfinite(s.height_m) || !std::isfinite(w.u) ||
        !std::isfinite(w.v)) {
      throw InvalidInputError("non-finite sample at index " +
                              std::to_string(i));
    }
    if (i > 0) {
      const double gap = record.telemetry[i].t - record.telemetry[i - 1].t;
      if (std::abs(gap - dt) > 1e-9) {
        throw InvalidInputError("non-uniform grid at index " +
                                std::to_string(i));
      }
    }
    if (std::abs(w.t - s.t) > 1e-9) {
      throw InvalidInputError("telemetry/wind time mismatch at index " +
                              std::to_string(i));
    }
  }
}

std::vector<TelemetrySample> parse_flight_csv(std::istream& in) {
  const std::vector<std::string> required = {"time_s", "xSpeed_mph",
                                             "ySpeed_mph", "height_m",
                                             "yaw_deg"};
  CsvTable table = read_csv(in, required);
  std::vector<TelemetrySample> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    TelemetrySample s;
    s.t = cell_value(row, table, "time_s");
    s.x_speed_ms = Speed::mph(cell_value(row, table, "xSpeed_mph")).as_ms();
    s.y_speed_ms = Speed::mph(cell_value(row, table, "ySpeed_mph")).as_ms();
    s.height_m = cell_value(row, table, "height_m");
    s.yaw = normalize_angle(cell_value(row, table, "yaw_deg"));
    if (s.t < 0.0) throw ParseError(row.first, "negative time");
    if (s.height_m < 0.0) throw ParseError(row.first, "negative height");
    out.push_back(s);
  }
  return out;
}

std::vector<WindSample> parse_anemometer_csv(std::istream& in,
                                             double max_abs_ms) {
  const std::vector<std::string> required = {"time_s", "u_ms", "v_ms"};
  CsvTable table = read_csv(in, required);
  std::vector<WindSample> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    WindSample w;
    w.t = cell_value(row, table, "time_s");
    w.u = cell_value(row, table, "u_ms");
    w.v = cell_value(row, table, "v_ms");
    if (w.t < 0.0) throw ParseError(row.first, "negative time");
    if (std::abs(w.u) > max_abs_ms || std::abs(w.v) > max_abs_ms) {
      throw ParseError(row.first, "wind component exceeds sanity bound of " +
                                      detail::format_double(max_abs_ms) +
                                      " m/s");
    }
    out.push_back(w);
  }
  return out;
}

FlightRecord align(const std::vector<TelemetrySample>& telemetry,
                   const std::vector<WindSample>& wind, double sample_dt,
                   RecordMeta meta) {
  if (telemetry.empty() || wind.empty()) {
    throw EmptyInputError("cannot align an empty series");
  }
  if (!(sample_dt > 0.0)) throw InvalidInputError("sample_dt must be positive");
  require_strictly_increasing(telemetry, "telemetry");
  require_strictly_increasing(wind, "wind");

  const double lo = std::max(telemetry.front().t, wind.front().t);
  const double hi = std::min(telemetry.back().t, wind.back().t);
  if (lo > hi) throw AlignmentError("series do not overlap in time");

  const double tol = sample_dt / 2.0 + 1e-9;
  const long k_lo = static_cast<long>(std::ceil(lo / sample_dt - 1e-9));
  const long k_hi = static_cast<long>(std::floor(hi / sample_dt + 1e-9));

  FlightRecord record;
  record.meta = std::move(meta);
  record.meta.sample_dt = sample_dt;
  long first_kept = -1;
  for (long k = k_lo; k <= k_hi; ++k) {
    const double g = static_cast<double>(k) * sample_dt;
    const std::size_t ti = nearest_index(telemetry, g);
    const std::size_t wi = nearest_index(wind, g);
    const bool matched = std::abs(telemetry[ti].t - g) <= tol &&
                         std::abs(wind[wi].t - g) <= tol;
    if (!matched) {
      if (first_kept >= 0) {
        throw AlignmentError("coverage gap at t=" + detail::format_double(g));
      }
      continue;
    }
    if (first_kept < 0) first_kept = k;
    const double t = static_cast<double>(k - first_kept) * sample_dt;
    TelemetrySample s = telemetry[ti];
    s.t = t;
    WindSample w = wind[wi];
    w.t = t;
    record.telemetry.push_back(s);
    record.wind.push_back(w);
  }
  if (record.empty()) {
    throw AlignmentError("no grid point matched both series");
  }
  return record;
}

void save_record(const FlightRecord& record, std::ostream& out) {
  validate_record(record);
  require_no_newline(record.meta.flight_id, "flight_id");
  require_no_newline(record.meta.takeoff_label, "takeoff_label");
  require_no_newline(record.meta.created_at, "created_at");

  std::string body;
  body.append(kRecordMagic);
  body += '\n';
  body += "# flight_id=" + record.meta.flight_id + '\n';
  body += "# takeoff=" + record.meta.takeoff_label + '\n';
  body += "# sample_dt=" + detail::format_double(record.meta.sample_dt) + '\n';
  body += "# created_at=" + record.meta.created_at + '\n';
  body.append(kRecordHeader);
  body += '\n';
  for (std::size_t i = 0; i < record.size(); ++i) {
    const auto& s = record.telemetry[i];
    const auto& w = record.wind[i];
    body += detail::format_double(s.t) + ',' +
            detail::format_double(s.x_speed_ms) + ',' +
            detail::format_double(s.y_speed_ms) + ',' +
            detail::format_double(s.height_m) + ',' +
            detail::format_double(s.yaw.degrees()) + ',' +
            detail::format_double(w.u) + ',' + detail::format_double(w.v) +
            '\n';
  }

  char crc_hex[16];
  std::snprintf(crc_hex, sizeof crc_hex, "%08x", detail::crc32(body));
  out << body << "# crc32=" << crc_hex << '\n';
  if (!out) throw IoError("failed to write record");
}

FlightRecord load_record(std::istream& in) {
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  const std::string crc_tag = "# crc32=";
  const std::size_t crc_pos = content.rfind(crc_tag);
  if (crc_pos == std::string::npos) {
    throw FormatError("record is missing its crc32 trailer");
  }
  const std::string crc_text =
      detail::trim(content.substr(crc_pos + crc_tag.size()));
  if (crc_text.size() != 8 ||
      crc_text.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw FormatError("malformed crc32 trailer");
  }
  const std::uint32_t want =
      static_cast<std::uint32_t>(std::stoul(crc_text, nullptr, 16));
  const std::uint32_t got =
      detail::crc32(std::string_view(content).substr(0, crc_pos));
  if (want != got) throw FormatError("checksum mismatch");

  std::istringstream body(content.substr(0, crc_pos));
  std::string line;
  if (!std::getline(body, line) || detail::trim(line) != kRecordMagic) {
    throw FormatError("unsupported record version");
  }

  FlightRecord record;
  bool saw_header = false;
  std::size_t line_no = 1;
  while (std::getline(body, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string entry = detail::trim(t.substr(1));
      const std::size_t eq = entry.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = entry.substr(0, eq);
      const std::string value = entry.substr(eq + 1);
      if (key == "flight_id") record.meta.flight_id = value;
      else if (key == "takeoff") record.meta.takeoff_label = value;
      else if (key == "created_at") record.meta.created_at = value;
      else if (key == "sample_dt") {
        try {
          record.meta.sample_dt = detail::parse_double(value);
        } catch (const Error&) {
          throw FormatError("bad sample_dt in record metadata");
        }
      }
      continue;
    }
    if (!saw_header) {
      if (t != kRecordHeader) throw FormatError("unexpected record columns");
      saw_header = true;
      continue;
    }
    auto cells = split_csv(line);
    if (cells.size() != 7) {
      throw ParseError(line_no, "expected 7 columns");
    }
    double values[7];
    for (std::size_t i = 0; i < 7; ++i) {
      try {
        values[i] = detail::parse_double(cells[i]);
      } catch (const Error&) {
        throw ParseError(line_no, "bad number '" + cells[i] + "'");
      }
    }
    TelemetrySample s;
    s.t = values[0];
    s.x_speed_ms = values[1];
    s.y_speed_ms = values[2];
    s.height_m = values[3];
    s.yaw = normalize_angle(values[4]);
    WindSample w;
    w.t = values[0];
    w.u = values[5];
    w.v = values[6];
    record.telemetry.push_back(s);
    record.wind.push_back(w);
  }
  if (!saw_header) throw FormatError("record is missing its column header");
  validate_record(record);
  return record;
}

}  // namespace windward
