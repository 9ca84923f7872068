#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "windward/deadreckon.hpp"
#include "windward/planner_lasso.hpp"
#include "windward/planner_weighted.hpp"
#include "windward/windsim.hpp"

// Closed-loop experiment harness. One scenario = simulate a forward flight,
// hand the planner the record (optionally with its logged winds scaled by a
// forward gamma factor), then fly the planned route backward through the
// same plant while the true wind is the time-mirrored forward wind scaled
// by a backward gamma factor. Arrival error is measured against the real
// takeoff point, not the planner's belief.
//
// Determinism: everything derives from Scenario::seed (the wind field's own
// seed is replaced by a scenario-derived one), so a report is reproducible
// bit for bit. Per-step planner latency is only measured when a scenario
// asks for it, keeping default outputs byte-identical across machines.

namespace windward {

struct GammaRange {
  double lo = 1.0;
  double hi = 1.0;

  bool active() const { return lo != 1.0 || hi != 1.0; }
};

enum class PlannerKind { kWeighted, kLasso };

struct Scenario {
  std::string id = "scenario";
  FlightScript script;
  WindField field;
  PlantConfig plant;
  PlannerKind planner = PlannerKind::kWeighted;
  WeightedParams weighted;
  LassoPlanConfig lasso;
  GammaRange gamma_forward;   // scales the winds stored in the record
  GammaRange gamma_backward;  // scales the winds met on the way home
  std::uint64_t seed = 1;
  bool seed_specified = false;  // set when the config named a seed
  std::size_t repetitions = 1;  // reported error is the median-|error| rep
  bool measure_timing = false;
};

/// Seed the wind field of repetition `rep` runs under, derived from the
/// scenario seed. Exposed so a standalone simulation can reproduce the
/// exact forward flight of an evaluation repetition.
std::uint64_t field_seed_for(std::uint64_t scenario_seed, std::size_t rep);

struct TimingStats {
  bool measured = false;
  double mean_ms = 0.0;
  double p99_ms = 0.0;
};

struct RunReport {
  std::string scenario_id;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_lo = 1.0;  // backward range echo
  double gamma_hi = 1.0;
  double compensation = 0.0;
  ArrivalError error;
  Path forward_path;                     // dead-reckoned forward route
  std::vector<PathPoint> backward_trace; // real positions flown home
  TimingStats timing;
};

/// Run one scenario (all repetitions) and aggregate. Module errors are
/// rethrown annotated with the scenario id.
RunReport run_scenario(const Scenario& scenario);

enum class SweepAxis { kAlphaBeta, kGamma, kCompensation };

/// One swept value: beta for kAlphaBeta, (lo, hi) for kGamma, c for
/// kCompensation.
struct SweepPoint {
  double a = 0.0;
  double b = 0.0;
};

/// One run per point; everything else, seeds included, held fixed. Run ids
/// get a `[axis=value]` suffix.
std::vector<RunReport> sweep(const Scenario& base, SweepAxis axis,
                             const std::vector<SweepPoint>& points);

/// Write `report.csv` plus one path-overlay SVG per run into out_dir.
/// Reports are sorted by scenario id first. Returns the written paths.
/// Throws EmptyInputError when reports is empty.
std::vector<std::string> emit_report(const std::vector<RunReport>& reports,
                                     const std::string& out_dir);

/// Summary CSV schema, also used by parse_report.
inline constexpr const char* kReportHeader =
    "scenario_id,alpha,beta,gamma_lo,gamma_hi,compensation,x_err_m,y_err_m,"
    "err_mag_m,mean_step_ms,p99_step_ms";

/// One parsed report row; timing fields are NaN when they were not measured.
struct ReportRow {
  std::string scenario_id;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_lo = 1.0;
  double gamma_hi = 1.0;
  double compensation = 0.0;
  double x_err_m = 0.0;
  double y_err_m = 0.0;
  double err_mag_m = 0.0;
  double mean_step_ms = 0.0;
  double p99_step_ms = 0.0;
};

std::vector<ReportRow> parse_report(std::istream& in);

/// Forward/backward overlay plot, self-contained SVG.
void write_overlay_svg(const Path& forward,
                       const std::vector<PathPoint>& backward,
                       std::ostream& out);

}  // namespace windward
