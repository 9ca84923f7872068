#include "windward/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "windward/detail/random.hpp"
#include "windward/detail/text.hpp"
#include "windward/lasso.hpp"

namespace windward {

namespace {

// Seed salts for the independent streams of one repetition.
constexpr std::uint64_t kSaltRep = 0x726570;     // per-repetition base
constexpr std::uint64_t kSaltField = 0x666c64;   // wind field
constexpr std::uint64_t kSaltGammaF = 0x67666f;  // forward gamma draws
constexpr std::uint64_t kSaltGammaB = 0x676261;  // backward gamma draws

struct StepClock {
  bool enabled = false;
  std::vector<double>* sink = nullptr;
  std::chrono::steady_clock::time_point t0;

  void start() {
    if (enabled) t0 = std::chrono::steady_clock::now();
  }
  void stop() {
    if (!enabled) return;
    const auto t1 = std::chrono::steady_clock::now();
    sink->push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
};

// The backward plant: same law as the forward simulator, fed with the
// mirrored (and gamma-scaled) true wind.
struct BackwardPlant {
  const PlantConfig& plant;
  double north;
  double east;
  double height;

  void apply(const BackwardCommand& cmd, const Vec2& wind) {
    const double residual = 1.0 - plant.compensation;
    double vn = cmd.x_cmd_ms + residual * wind.north;
    double ve = cmd.y_cmd_ms + residual * wind.east;
    const double speed = std::hypot(vn, ve);
    if (speed > plant.max_speed_ms) {
      const double k = plant.max_speed_ms / speed;
      vn *= k;
      ve *= k;
    }
    const double dt = plant.sample_dt;
    north += vn * dt;
    east += ve * dt;
    const double dh = cmd.target_height_m - height;
    const double max_dh = plant.climb_rate_ms * dt;
    height += std::clamp(dh, -max_dh, max_dh);
  }
};

struct RepOutcome {
  ArrivalError error;
  Path forward_path;
  std::vector<PathPoint> backward_trace;
};

// Live backward wind at step i is the forward wind of mirrored tick
// j = n-1-i (held at the earliest tick once a planner overruns the record),
// scaled by that step's gamma draw. The sensed reading is the stored
// anemometer sample of the same tick scaled identically, so with gamma = 1
// the planner sees bit-for-bit the wind it saw on the way out; that is what
// makes the equal-wind retrace exact rather than merely close.
std::size_t mirror_index(std::size_t i, std::size_t n) {
  return (i < n) ? (n - 1 - i) : 0;
}

RepOutcome run_once(const Scenario& s, std::uint64_t rep_seed,
                    std::vector<double>* timings_ms) {
  WindField field = s.field;
  field.seed = detail::mix_seed(rep_seed, kSaltField);

  const SimResult sim = simulate(s.script, field, s.plant);
  const FlightRecord& record = sim.record;
  const std::size_t n = record.size();

  FlightRecord planner_view = record;
  if (s.gamma_forward.active()) {
    planner_view = apply_gamma(record, s.gamma_forward.lo, s.gamma_forward.hi,
                               detail::mix_seed(rep_seed, kSaltGammaF));
  }

  detail::Rng gamma_rng(detail::mix_seed(rep_seed, kSaltGammaB));
  const bool scale_backward = s.gamma_backward.active();
  auto backward_gamma = [&]() {
    return scale_backward
               ? detail::uniform(gamma_rng, s.gamma_backward.lo,
                                 s.gamma_backward.hi)
               : 1.0;
  };

  RepOutcome out;
  out.forward_path = integrate_path(planner_view);

  BackwardPlant plant{s.plant, sim.truth.end.north_m, sim.truth.end.east_m,
                      sim.truth.end.height_m};
  out.backward_trace.push_back(sim.truth.end);
  StepClock clock{timings_ms != nullptr, timings_ms, {}};

  auto trace_step = [&](std::size_t i) {
    const double t = sim.truth.end.t + static_cast<double>(i + 1) *
                                           s.plant.sample_dt;
    out.backward_trace.push_back(
        PathPoint{t, plant.north, plant.east, plant.height});
  };

  if (s.planner == PlannerKind::kWeighted) {
    WeightedPlanner planner(planner_view, s.weighted);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = mirror_index(i, n);
      const double g = backward_gamma();
      WindSample sensed = record.wind[j];
      sensed.u *= g;
      sensed.v *= g;
      clock.start();
      const BackwardCommand cmd = planner.next(sensed, record.telemetry[j].yaw);
      clock.stop();
      const Vec2 w{g * sim.truth.true_wind[j].north,
                   g * sim.truth.true_wind[j].east};
      plant.apply(cmd, w);
      trace_step(i);
    }
  } else {
    Dataset1D north_data;
    Dataset1D east_data;
    north_data.xs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const TrueWind w =
          to_true_north_east(planner_view.wind[i], planner_view.telemetry[i].yaw);
      north_data.xs.push_back(w.north_r);
      north_data.ys.push_back(planner_view.telemetry[i].x_speed_ms);
      east_data.xs.push_back(w.east_r);
      east_data.ys.push_back(planner_view.telemetry[i].y_speed_ms);
    }
    const LassoModel north_model = fit_lasso_cv(north_data);
    const LassoModel east_model = fit_lasso_cv(east_data);

    LassoPlanConfig cfg = s.lasso;
    cfg.sample_dt = s.plant.sample_dt;
    LassoPlanner planner(out.forward_path.end.north_m,
                         out.forward_path.end.east_m,
                         out.forward_path.end.height_m, north_model,
                         east_model, cfg);
    std::size_t i = 0;
    while (!planner.done()) {
      const std::size_t j = mirror_index(i, n);
      const double g = backward_gamma();
      WindSample sensed = record.wind[j];
      sensed.u *= g;
      sensed.v *= g;
      clock.start();
      const BackwardCommand cmd = planner.next(sensed, record.telemetry[j].yaw);
      clock.stop();
      const Vec2 w{g * sim.truth.true_wind[j].north,
                   g * sim.truth.true_wind[j].east};
      plant.apply(cmd, w);
      trace_step(i);
      ++i;
    }
  }

  out.error = arrival_error(plant.north, plant.east);
  return out;
}

TimingStats summarize_timing(std::vector<double>& ms) {
  TimingStats stats;
  if (ms.empty()) return stats;
  stats.measured = true;
  double total = 0.0;
  for (double v : ms) total += v;
  stats.mean_ms = total / static_cast<double>(ms.size());
  std::sort(ms.begin(), ms.end());
  const std::size_t idx = std::min(
      ms.size() - 1,
      static_cast<std::size_t>(
          std::ceil(0.99 * static_cast<double>(ms.size()))) -
          1);
  stats.p99_ms = ms[idx];
  return stats;
}

std::string sanitize_filename(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                    c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? std::string("run") : out;
}

std::string csv_number(double v) {
  return std::isnan(v) ? std::string() : detail::format_double(v);
}

}  // namespace

std::uint64_t field_seed_for(std::uint64_t scenario_seed, std::size_t rep) {
  return detail::mix_seed(detail::mix_seed(scenario_seed, kSaltRep + rep),
                          kSaltField);
}

RunReport run_scenario(const Scenario& scenario) {
  try {
    if (scenario.repetitions == 0) {
      throw ConfigError("repetitions must be >= 1");
    }
    if (!(scenario.gamma_forward.lo > 0.0) ||
        scenario.gamma_forward.lo > scenario.gamma_forward.hi ||
        !(scenario.gamma_backward.lo > 0.0) ||
        scenario.gamma_backward.lo > scenario.gamma_backward.hi) {
      throw ConfigError("gamma ranges require 0 < lo <= hi");
    }
    scenario.weighted.validate();
    scenario.lasso.validate();

    std::vector<double> timings;
    std::vector<RepOutcome> outcomes;
    outcomes.reserve(scenario.repetitions);
    for (std::size_t r = 0; r < scenario.repetitions; ++r) {
      const std::uint64_t rep_seed =
          detail::mix_seed(scenario.seed, kSaltRep + r);
      outcomes.push_back(run_once(scenario, rep_seed,
                                  scenario.measure_timing ? &timings
                                                          : nullptr));
    }

    // Report the median-|error| repetition (lower middle on even counts),
    // ties broken by repetition order.
    std::vector<std::size_t> order(outcomes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return outcomes[a].error.magnitude_m <
                              outcomes[b].error.magnitude_m;
                     });
    RepOutcome& median = outcomes[order[(order.size() - 1) / 2]];

    RunReport report;
    report.scenario_id = scenario.id;
    report.alpha = scenario.weighted.alpha;
    report.beta = scenario.weighted.beta;
    report.gamma_lo = scenario.gamma_backward.lo;
    report.gamma_hi = scenario.gamma_backward.hi;
    report.compensation = scenario.plant.compensation;
    report.error = median.error;
    report.forward_path = std::move(median.forward_path);
    report.backward_trace = std::move(median.backward_trace);
    report.timing = summarize_timing(timings);
    return report;
  } catch (const ConfigError& e) {
    throw ConfigError("scenario '" + scenario.id + "': " + e.what());
  } catch (const Error& e) {
    throw InvalidInputError("scenario '" + scenario.id + "': " + e.what());
  }
}

std::vector<RunReport> sweep(const Scenario& base, SweepAxis axis,
                             const std::vector<SweepPoint>& points) {
  if (points.empty()) throw EmptyInputError("sweep needs at least one point");
  std::vector<RunReport> reports;
  reports.reserve(points.size());
  for (const SweepPoint& p : points) {
    Scenario s = base;
    switch (axis) {
      case SweepAxis::kAlphaBeta:
        s.weighted.beta = p.a;
        s.weighted.alpha = 1.0 - p.a;
        s.id += "[beta=" + detail::format_double(p.a) + "]";
        break;
      case SweepAxis::kGamma:
        s.gamma_backward.lo = p.a;
        s.gamma_backward.hi = p.b;
        s.id += "[gamma=" + detail::format_double(p.a) + ":" +
                detail::format_double(p.b) + "]";
        break;
      case SweepAxis::kCompensation:
        s.plant.compensation = p.a;
        s.id += "[c=" + detail::format_double(p.a) + "]";
        break;
    }
    reports.push_back(run_scenario(s));
  }
  return reports;
}

void write_overlay_svg(const Path& forward,
                       const std::vector<PathPoint>& backward,
                       std::ostream& out) {
  double lo_n = 0.0, hi_n = 0.0, lo_e = 0.0, hi_e = 0.0;
  auto grow = [&](double n, double e) {
    lo_n = std::min(lo_n, n);
    hi_n = std::max(hi_n, n);
    lo_e = std::min(lo_e, e);
    hi_e = std::max(hi_e, e);
  };
  for (const auto& p : forward.points) grow(p.north_m, p.east_m);
  grow(forward.end.north_m, forward.end.east_m);
  for (const auto& p : backward) grow(p.north_m, p.east_m);

  const double span = std::max({hi_n - lo_n, hi_e - lo_e, 1.0});
  const double margin = span * 0.08;
  lo_n -= margin;
  lo_e -= margin;
  const double scale = 600.0 / (span + 2.0 * margin);

  // East grows to the right, north grows upward (so the y pixel flips).
  auto px = [&](double e) { return 20.0 + (e - lo_e) * scale; };
  auto py = [&](double n) { return 620.0 - (n - lo_n) * scale; };
  auto point_list = [&](auto begin, auto end) {
    std::string s;
    for (auto it = begin; it != end; ++it) {
      s += detail::format_double(px(it->east_m)) + ',' +
           detail::format_double(py(it->north_m)) + ' ';
    }
    if (!s.empty()) s.pop_back();
    return s;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"640\" viewBox=\"0 0 640 640\">\n";
  out << "<rect width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n";
  std::vector<PathPoint> fwd = forward.points;
  fwd.push_back(forward.end);
  out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" "
         "points=\""
      << point_list(fwd.begin(), fwd.end()) << "\"/>\n";
  if (!backward.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#c23b22\" stroke-width=\"2\" "
           "stroke-dasharray=\"6 3\" points=\""
        << point_list(backward.begin(), backward.end()) << "\"/>\n";
  }
  const double ox = px(0.0);
  const double oy = py(0.0);
  out << "<line x1=\"" << detail::format_double(ox - 8) << "\" y1=\""
      << detail::format_double(oy) << "\" x2=\""
      << detail::format_double(ox + 8) << "\" y2=\""
      << detail::format_double(oy) << "\" stroke=\"#222222\" stroke-width=\"2\"/>\n";
  out << "<line x1=\"" << detail::format_double(ox) << "\" y1=\""
      << detail::format_double(oy - 8) << "\" x2=\""
      << detail::format_double(ox) << "\" y2=\""
      << detail::format_double(oy + 8) << "\" stroke=\"#222222\" stroke-width=\"2\"/>\n";
  out << "<text x=\"24\" y=\"28\" font-family=\"sans-serif\" font-size=\"14\" "
         "fill=\"#1f6fb2\">forward (dead-reckoned)</text>\n";
  out << "<text x=\"24\" y=\"48\" font-family=\"sans-serif\" font-size=\"14\" "
         "fill=\"#c23b22\">backward (ground truth)</text>\n";
  out << "<text x=\"24\" y=\"68\" font-family=\"sans-serif\" font-size=\"14\" "
         "fill=\"#222222\">+ takeoff</text>\n";
  out << "</svg>\n";
  if (!out) throw IoError("failed to write SVG");
}

std::vector<std::string> emit_report(const std::vector<RunReport>& reports,
                                     const std::string& out_dir) {
  if (reports.empty()) throw EmptyInputError("no reports to emit");

  std::vector<const RunReport*> sorted;
  sorted.reserve(reports.size());
  for (const auto& r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RunReport* a, const RunReport* b) {
                     return a->scenario_id < b->scenario_id;
                   });

  std::vector<std::string> written;
  const std::string csv_path = out_dir + "/report.csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw IoError("cannot open " + csv_path);
  csv << kReportHeader << '\n';
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const RunReport& r = *sorted[i];
    const double mean_ms =
        r.timing.measured ? r.timing.mean_ms
                          : std::numeric_limits<double>::quiet_NaN();
    const double p99_ms =
        r.timing.measured ? r.timing.p99_ms
                          : std::numeric_limits<double>::quiet_NaN();
    std::string id = r.scenario_id;  // ids must not break the CSV shape
    for (char& c : id) {
      if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    csv << id << ',' << detail::format_double(r.alpha) << ','
        << detail::format_double(r.beta) << ','
        << detail::format_double(r.gamma_lo) << ','
        << detail::format_double(r.gamma_hi) << ','
        << detail::format_double(r.compensation) << ','
        << detail::format_double(r.error.x_err_m) << ','
        << detail::format_double(r.error.y_err_m) << ','
        << detail::format_double(r.error.magnitude_m) << ','
        << csv_number(mean_ms) << ',' << csv_number(p99_ms) << '\n';

    const std::string svg_path = out_dir + "/run_" + std::to_string(i) + "_" +
                                 sanitize_filename(r.scenario_id) + ".svg";
    std::ofstream svg(svg_path, std::ios::binary);
    if (!svg) throw IoError("cannot open " + svg_path);
    write_overlay_svg(r.forward_path, r.backward_trace, svg);
    written.push_back(svg_path);
  }
  csv.flush();
  if (!csv) throw IoError("failed to write " + csv_path);
  written.insert(written.begin(), csv_path);
  return written;
}

std::vector<ReportRow> parse_report(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kReportHeader) {
    throw FormatError("unexpected report header");
  }
  std::vector<ReportRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cell);
        cell.clear();
      } else if (c != '\r') {
        cell += c;
      }
    }
    cells.push_back(cell);
    if (cells.size() != 11) throw ParseError(line_no, "expected 11 columns");
    auto num = [&](std::size_t idx) {
      const std::string t = detail::trim(cells[idx]);
      if (t.empty()) return std::numeric_limits<double>::quiet_NaN();
      try {
        return detail::parse_double(t);
      } catch (const Error&) {
        throw ParseError(line_no, "bad number '" + t + "'");
      }
    };
    ReportRow row;
    row.scenario_id = cells[0];
    row.alpha = num(1);
    row.beta = num(2);
    row.gamma_lo = num(3);
    row.gamma_hi = num(4);
    row.compensation = num(5);
    row.x_err_m = num(6);
    row.y_err_m = num(7);
    row.err_mag_m = num(8);
    row.mean_step_ms = num(9);
    row.p99_step_ms = num(10);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyInputError("report has no rows");
  return rows;
}

}  // namespace windward
