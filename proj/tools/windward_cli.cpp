// windward: GNSS-independent return-to-home toolkit.
//
// Subcommands tie the pipeline together: simulate a flight, reconstruct its
// route by dead reckoning, plan the backward route offline, and run or sweep
// closed-loop evaluations. Every run echoes its fully-resolved configuration
// into the output directory, and with a fixed --seed every output file is
// byte-identical across runs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "windward/deadreckon.hpp"
#include "windward/detail/random.hpp"
#include "windward/detail/text.hpp"
#include "windward/evaluator.hpp"
#include "windward/lasso.hpp"
#include "windward/logstore.hpp"
#include "windward/planner_lasso.hpp"
#include "windward/planner_weighted.hpp"
#include "windward/scenario_io.hpp"
#include "windward/windsim.hpp"

namespace {

using namespace windward;
using Json = nlohmann::ordered_json;

struct Flags {
  std::string scenario_path;
  std::string record_path;
  std::string out_dir;
  std::optional<std::string> planner;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::string> gamma;
  std::optional<std::uint64_t> seed;
  bool timing = false;
  std::string axis;
  std::string values;
};

std::uint64_t draw_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

GammaRange parse_gamma_flag(const std::string& text) {
  const std::size_t colon = text.find(':');
  GammaRange range;
  try {
    if (colon == std::string::npos) {
      range.lo = range.hi = detail::parse_double(text);
    } else {
      range.lo = detail::parse_double(text.substr(0, colon));
      range.hi = detail::parse_double(text.substr(colon + 1));
    }
  } catch (const Error&) {
    throw ConfigError("--gamma expects lo:hi, got '" + text + "'");
  }
  if (!(range.lo > 0.0) || range.lo > range.hi) {
    throw ConfigError("--gamma requires 0 < lo <= hi");
  }
  return range;
}

PlannerKind parse_planner_flag(const std::string& name) {
  if (name == "weighted") return PlannerKind::kWeighted;
  if (name == "lasso") return PlannerKind::kLasso;
  throw ConfigError("unknown planner '" + name + "' (valid: weighted, lasso)");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("failed to write " + path);
}

std::string ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("--out is required");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);
  return dir;
}

FlightRecord load_record_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read record file: " + path);
  return load_record(in);
}

// Scenario file + command-line flags, flags winning. Draws a seed when
// neither names one, so the echoed config always pins the run.
Scenario resolve_scenario(const Flags& flags) {
  Scenario s = load_scenario_file(flags.scenario_path);
  if (flags.planner) s.planner = parse_planner_flag(*flags.planner);
  if (flags.beta && !flags.alpha) {
    s.weighted = WeightedParams::from_beta(*flags.beta);
  } else {
    if (flags.alpha) s.weighted.alpha = *flags.alpha;
    if (flags.beta) s.weighted.beta = *flags.beta;
  }
  s.weighted.validate();
  if (flags.gamma) s.gamma_backward = parse_gamma_flag(*flags.gamma);
  if (flags.timing) s.measure_timing = true;
  if (flags.seed) {
    s.seed = *flags.seed;
    s.seed_specified = true;
  } else if (!s.seed_specified) {
    s.seed = draw_seed();
    s.seed_specified = true;
    std::cerr << "note: no seed given, drew " << s.seed << "\n";
  }
  return s;
}

std::string flight_csv_text(const FlightRecord& record) {
  std::ostringstream out;
  out << "time_s,xSpeed_mph,ySpeed_mph,height_m,yaw_deg\n";
  for (const auto& s : record.telemetry) {
    out << detail::format_double(s.t) << ','
        << detail::format_double(Speed::ms(s.x_speed_ms).as_mph()) << ','
        << detail::format_double(Speed::ms(s.y_speed_ms).as_mph()) << ','
        << detail::format_double(s.height_m) << ','
        << detail::format_double(s.yaw.degrees()) << '\n';
  }
  return out.str();
}

std::string wind_csv_text(const FlightRecord& record) {
  std::ostringstream out;
  out << "time_s,u_ms,v_ms\n";
  for (const auto& w : record.wind) {
    out << detail::format_double(w.t) << ',' << detail::format_double(w.u)
        << ',' << detail::format_double(w.v) << '\n';
  }
  return out.str();
}

std::string truth_csv_text(const GroundTruth& truth) {
  std::ostringstream out;
  out << "time_s,north_m,east_m,height_m\n";
  auto row = [&](const PathPoint& p) {
    out << detail::format_double(p.t) << ',' << detail::format_double(p.north_m)
        << ',' << detail::format_double(p.east_m) << ','
        << detail::format_double(p.height_m) << '\n';
  };
  for (const auto& p : truth.positions) row(p);
  row(truth.end);
  return out.str();
}

int cmd_simulate(const Flags& flags) {
  const Scenario s = resolve_scenario(flags);
  const std::string dir = ensure_out_dir(flags.out_dir);

  WindField field = s.field;
  field.seed = field_seed_for(s.seed, 0);
  SimResult sim = simulate(s.script, field, s.plant);
  sim.record.meta.flight_id = s.id;

  write_file(dir + "/flight.csv", flight_csv_text(sim.record));
  write_file(dir + "/wind.csv", wind_csv_text(sim.record));
  std::ostringstream record_text;
  save_record(sim.record, record_text);
  write_file(dir + "/record.wr", record_text.str());
  write_file(dir + "/truth.csv", truth_csv_text(sim.truth));
  write_file(dir + "/config.json", scenario_to_json(s));
  std::cout << "simulated " << sim.record.size() << " samples into " << dir
            << "\n";
  return 0;
}

int cmd_reconstruct(const Flags& flags) {
  const std::string dir = ensure_out_dir(flags.out_dir);
  const FlightRecord record = load_record_file(flags.record_path);
  const Path path = integrate_path(record);

  std::ostringstream csv;
  write_path_csv(path, csv);
  write_file(dir + "/path.csv", csv.str());
  std::ostringstream svg;
  write_overlay_svg(path, {}, svg);
  write_file(dir + "/path.svg", svg.str());

  Json echo;
  echo["command"] = "reconstruct";
  echo["record"] = flags.record_path;
  echo["samples"] = record.size();
  write_file(dir + "/config.json", echo.dump(2) + "\n");
  std::cout << "reconstructed " << path.points.size() << " points; end ("
            << detail::format_double(path.end.north_m) << ", "
            << detail::format_double(path.end.east_m) << ") m\n";
  return 0;
}

int cmd_plan(const Flags& flags) {
  const std::string dir = ensure_out_dir(flags.out_dir);
  const FlightRecord record = load_record_file(flags.record_path);
  const std::size_t n = record.size();

  const PlannerKind kind =
      flags.planner ? parse_planner_flag(*flags.planner)
                    : PlannerKind::kWeighted;
  WeightedParams params;
  if (flags.beta && !flags.alpha) {
    params = WeightedParams::from_beta(*flags.beta);
  } else {
    if (flags.alpha) params.alpha = *flags.alpha;
    if (flags.beta) params.beta = *flags.beta;
  }
  params.validate();
  GammaRange gamma;
  if (flags.gamma) gamma = parse_gamma_flag(*flags.gamma);
  std::uint64_t seed = 0;
  if (gamma.active()) {
    if (flags.seed) {
      seed = *flags.seed;
    } else {
      seed = draw_seed();
      std::cerr << "note: no seed given, drew " << seed << "\n";
    }
  } else if (flags.seed) {
    seed = *flags.seed;
  }

  // Offline planning replays the recorded wind, time-mirrored (and gamma
  // scaled), as the live backward stream.
  detail::Rng gamma_rng(detail::mix_seed(seed, 0x676261));
  auto mirrored = [&](std::size_t i) {
    const std::size_t j = (i < n) ? (n - 1 - i) : 0;
    WindSample w = record.wind[j];
    if (gamma.active()) {
      const double g = detail::uniform(gamma_rng, gamma.lo, gamma.hi);
      w.u *= g;
      w.v *= g;
    }
    return std::make_pair(w, record.telemetry[j].yaw);
  };

  std::vector<BackwardCommand> commands;
  if (kind == PlannerKind::kWeighted) {
    WeightedPlanner planner(record, params);
    while (!planner.done()) {
      const auto [wind, yaw] = mirrored(planner.step());
      commands.push_back(planner.next(wind, yaw));
    }
  } else {
    Dataset1D north_data;
    Dataset1D east_data;
    for (std::size_t i = 0; i < n; ++i) {
      const TrueWind w =
          to_true_north_east(record.wind[i], record.telemetry[i].yaw);
      north_data.xs.push_back(w.north_r);
      north_data.ys.push_back(record.telemetry[i].x_speed_ms);
      east_data.xs.push_back(w.east_r);
      east_data.ys.push_back(record.telemetry[i].y_speed_ms);
    }
    const LassoModel north_model = fit_lasso_cv(north_data);
    const LassoModel east_model = fit_lasso_cv(east_data);
    LassoPlanConfig cfg;
    cfg.sample_dt = record.meta.sample_dt;
    const Path path = integrate_path(record);
    LassoPlanner planner(path.end.north_m, path.end.east_m, path.end.height_m,
                         north_model, east_model, cfg);
    std::size_t i = 0;
    while (!planner.done()) {
      const auto [wind, yaw] = mirrored(i++);
      commands.push_back(planner.next(wind, yaw));
    }
  }

  std::ostringstream csv;
  write_commands_csv(commands, csv);
  write_file(dir + "/commands.csv", csv.str());

  Json echo;
  echo["command"] = "plan";
  echo["record"] = flags.record_path;
  echo["planner"] = (kind == PlannerKind::kWeighted) ? "weighted" : "lasso";
  echo["alpha"] = params.alpha;
  echo["beta"] = params.beta;
  echo["gamma_backward"] = {{"lo", gamma.lo}, {"hi", gamma.hi}};
  echo["seed"] = seed;
  write_file(dir + "/config.json", echo.dump(2) + "\n");
  std::cout << "planned " << commands.size() << " backward steps into " << dir
            << "\n";
  return 0;
}

int cmd_evaluate(const Flags& flags) {
  const Scenario s = resolve_scenario(flags);
  const std::string dir = ensure_out_dir(flags.out_dir);
  const RunReport report = run_scenario(s);
  emit_report({report}, dir);
  write_file(dir + "/config.json", scenario_to_json(s));
  std::cout << "arrival error " << detail::format_double(report.error.magnitude_m)
            << " m (x " << detail::format_double(report.error.x_err_m) << ", y "
            << detail::format_double(report.error.y_err_m) << ")\n";
  return 0;
}

std::vector<SweepPoint> parse_sweep_values(const std::string& axis,
                                           const std::string& text) {
  std::vector<SweepPoint> points;
  std::string token;
  std::istringstream stream(text);
  while (std::getline(stream, token, ',')) {
    token = detail::trim(token);
    if (token.empty()) continue;
    SweepPoint p;
    try {
      if (axis == "gamma") {
        const std::size_t colon = token.find(':');
        if (colon == std::string::npos) {
          p.a = p.b = detail::parse_double(token);
        } else {
          p.a = detail::parse_double(token.substr(0, colon));
          p.b = detail::parse_double(token.substr(colon + 1));
        }
      } else {
        p.a = detail::parse_double(token);
      }
    } catch (const Error&) {
      throw ConfigError("bad sweep value '" + token + "'");
    }
    points.push_back(p);
  }
  if (points.empty()) throw ConfigError("--values must list at least one value");
  return points;
}

int cmd_sweep(const Flags& flags) {
  const Scenario base = resolve_scenario(flags);
  const std::string dir = ensure_out_dir(flags.out_dir);

  SweepAxis axis;
  if (flags.axis == "alpha_beta") axis = SweepAxis::kAlphaBeta;
  else if (flags.axis == "gamma") axis = SweepAxis::kGamma;
  else if (flags.axis == "compensation") axis = SweepAxis::kCompensation;
  else {
    throw ConfigError("unknown axis '" + flags.axis +
                      "' (valid: alpha_beta, gamma, compensation)");
  }
  const std::vector<SweepPoint> points =
      parse_sweep_values(flags.axis, flags.values);

  const std::vector<RunReport> reports = sweep(base, axis, points);
  emit_report(reports, dir);
  write_file(dir + "/config.json", scenario_to_json(base));
  std::cout << "swept " << reports.size() << " runs into " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "windward: wind-aware return-to-home for drones flying without GNSS"};
  app.require_subcommand(1);

  Flags flags;
  auto add_common = [&](CLI::App* cmd, bool with_scenario, bool with_record) {
    if (with_scenario) {
      cmd->add_option("--scenario", flags.scenario_path,
                      "scenario config file (JSON)")
          ->required();
    }
    if (with_record) {
      cmd->add_option("--record", flags.record_path, "flight record file")
          ->required();
    }
    cmd->add_option("--out", flags.out_dir, "output directory")->required();
    cmd->add_option("--seed", flags.seed, "random seed (64-bit)");
  };
  auto add_planner_flags = [&](CLI::App* cmd) {
    cmd->add_option("--planner", flags.planner, "weighted | lasso");
    cmd->add_option("--alpha", flags.alpha, "weighted alpha");
    cmd->add_option("--beta", flags.beta,
                    "weighted beta (alpha defaults to 1 - beta)");
    cmd->add_option("--gamma", flags.gamma,
                    "backward wind scaling range lo:hi");
  };

  CLI::App* sim = app.add_subcommand(
      "simulate", "generate a synthetic flight and its logs");
  add_common(sim, true, false);

  CLI::App* rec = app.add_subcommand(
      "reconstruct", "dead-reckon the route of a recorded flight");
  add_common(rec, false, true);

  CLI::App* plan = app.add_subcommand(
      "plan", "compute a backward route offline from a record");
  add_common(plan, false, true);
  add_planner_flags(plan);

  CLI::App* eval = app.add_subcommand(
      "evaluate", "closed-loop backward-flight evaluation");
  add_common(eval, true, false);
  add_planner_flags(eval);
  eval->add_flag("--timing", flags.timing,
                 "measure per-step planner latency (off keeps outputs "
                 "byte-identical)");

  CLI::App* swp = app.add_subcommand(
      "sweep", "evaluate a scenario across one swept parameter");
  add_common(swp, true, false);
  add_planner_flags(swp);
  swp->add_flag("--timing", flags.timing,
                "measure per-step planner latency");
  swp->add_option("--axis", flags.axis,
                  "alpha_beta | gamma | compensation")
      ->required();
  swp->add_option("--values", flags.values,
                  "comma-separated values (gamma: lo:hi pairs)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(sim)) return cmd_simulate(flags);
    if (app.got_subcommand(rec)) return cmd_reconstruct(flags);
    if (app.got_subcommand(plan)) return cmd_plan(flags);
    if (app.got_subcommand(eval)) return cmd_evaluate(flags);
    if (app.got_subcommand(swp)) return cmd_sweep(flags);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
