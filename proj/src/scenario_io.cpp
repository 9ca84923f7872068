#include "windward/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

namespace windward {

namespace {

using Json = nlohmann::ordered_json;

void reject_unknown_keys(const Json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

double get_number(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError(std::string("'") + key + "' must be a number");
  }
  return v.get<double>();
}

bool get_bool(const Json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_boolean()) {
    throw ConfigError(std::string("'") + key + "' must be true or false");
  }
  return v.get<bool>();
}

WindModel parse_model(const std::string& name) {
  if (name == "constant") return WindModel::kConstant;
  if (name == "gust") return WindModel::kPiecewiseGust;
  if (name == "mean-reverting") return WindModel::kMeanReverting;
  throw ConfigError("unknown wind model '" + name +
                    "' (valid: constant, gust, mean-reverting)");
}

std::string model_name(WindModel model) {
  switch (model) {
    case WindModel::kConstant: return "constant";
    case WindModel::kPiecewiseGust: return "gust";
    case WindModel::kMeanReverting: return "mean-reverting";
  }
  return "constant";
}

FlightScript parse_script(const Json& obj) {
  reject_unknown_keys(obj, {"radius_limit_m", "legs"}, "script");
  FlightScript script;
  script.radius_limit_m = get_number(obj, "radius_limit_m", 300.0);
  if (!obj.contains("legs") || !obj.at("legs").is_array() ||
      obj.at("legs").empty()) {
    throw ConfigError("script needs a non-empty 'legs' array");
  }
  for (const Json& leg_json : obj.at("legs")) {
    reject_unknown_keys(leg_json,
                        {"vx_ms", "vy_ms", "duration_s", "height_m", "yaw"},
                        "script leg");
    FlightLeg leg;
    leg.velocity_cmd.north = get_number(leg_json, "vx_ms", 0.0);
    leg.velocity_cmd.east = get_number(leg_json, "vy_ms", 0.0);
    leg.duration_s = get_number(leg_json, "duration_s", 0.0);
    leg.target_height_m = get_number(leg_json, "height_m", 0.0);
    if (leg_json.contains("yaw")) {
      const Json& yaw = leg_json.at("yaw");
      if (yaw.is_string()) {
        if (yaw.get<std::string>() != "face-velocity") {
          throw ConfigError(
              "leg yaw must be \"face-velocity\" or a fixed angle in degrees");
        }
        leg.yaw_policy = YawPolicy::kFaceVelocity;
      } else if (yaw.is_number()) {
        leg.yaw_policy = YawPolicy::kFixed;
        leg.fixed_yaw_deg = yaw.get<double>();
      } else {
        throw ConfigError(
            "leg yaw must be \"face-velocity\" or a fixed angle in degrees");
      }
    }
    script.legs.push_back(leg);
  }
  return script;
}

WindField parse_field(const Json& obj) {
  reject_unknown_keys(
      obj,
      {"model", "mean_north_ms", "mean_east_ms", "gust_amplitude_ms",
       "gust_period_s", "reversion_rate", "noise_scale", "init_north_ms",
       "init_east_ms", "process_dt_s", "magnitude_cap_ms"},
      "field");
  WindField field;
  if (obj.contains("model")) {
    if (!obj.at("model").is_string()) {
      throw ConfigError("'model' must be a string");
    }
    field.model = parse_model(obj.at("model").get<std::string>());
  }
  field.mean.north = get_number(obj, "mean_north_ms", 0.0);
  field.mean.east = get_number(obj, "mean_east_ms", 0.0);
  field.gust_amplitude = get_number(obj, "gust_amplitude_ms", 0.0);
  field.gust_period_s = get_number(obj, "gust_period_s", 5.0);
  field.reversion_rate = get_number(obj, "reversion_rate", 0.5);
  field.noise_scale = get_number(obj, "noise_scale", 0.0);
  field.init.north = get_number(obj, "init_north_ms", 0.0);
  field.init.east = get_number(obj, "init_east_ms", 0.0);
  field.process_dt = get_number(obj, "process_dt_s", 0.2);
  field.magnitude_cap = get_number(obj, "magnitude_cap_ms", 25.0);
  return field;
}

PlantConfig parse_plant(const Json& obj) {
  reject_unknown_keys(obj,
                      {"compensation", "max_speed_ms", "apparent_wind_sensing",
                       "sample_dt_s", "climb_rate_ms"},
                      "plant");
  PlantConfig plant;
  plant.compensation = get_number(obj, "compensation", plant.compensation);
  plant.max_speed_ms = get_number(obj, "max_speed_ms", plant.max_speed_ms);
  plant.apparent_wind_sensing =
      get_bool(obj, "apparent_wind_sensing", plant.apparent_wind_sensing);
  plant.sample_dt = get_number(obj, "sample_dt_s", plant.sample_dt);
  plant.climb_rate_ms = get_number(obj, "climb_rate_ms", plant.climb_rate_ms);
  return plant;
}

GammaRange parse_gamma(const Json& obj, const std::string& where) {
  reject_unknown_keys(obj, {"lo", "hi"}, where);
  GammaRange range;
  range.lo = get_number(obj, "lo", 1.0);
  range.hi = get_number(obj, "hi", range.lo);
  if (!(range.lo > 0.0) || range.lo > range.hi) {
    throw ConfigError(where + " requires 0 < lo <= hi");
  }
  return range;
}

}  // namespace

Scenario parse_scenario_json(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("scenario must be a JSON object");
  reject_unknown_keys(root,
                      {"id", "seed", "repetitions", "timing", "script",
                       "field", "plant", "planner", "weighted", "lasso",
                       "gamma_forward", "gamma_backward"},
                      "scenario");

  Scenario s;
  if (root.contains("id")) {
    if (!root.at("id").is_string()) throw ConfigError("'id' must be a string");
    s.id = root.at("id").get<std::string>();
  }
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned()) {
      throw ConfigError("'seed' must be a non-negative integer");
    }
    s.seed = root.at("seed").get<std::uint64_t>();
    s.seed_specified = true;
  }
  if (root.contains("repetitions")) {
    if (!root.at("repetitions").is_number_unsigned() ||
        root.at("repetitions").get<std::uint64_t>() == 0) {
      throw ConfigError("'repetitions' must be a positive integer");
    }
    s.repetitions = root.at("repetitions").get<std::size_t>();
  }
  s.measure_timing = get_bool(root, "timing", false);

  if (!root.contains("script")) throw ConfigError("scenario needs a 'script'");
  s.script = parse_script(root.at("script"));
  if (root.contains("field")) s.field = parse_field(root.at("field"));
  if (root.contains("plant")) s.plant = parse_plant(root.at("plant"));

  if (root.contains("planner")) {
    if (!root.at("planner").is_string()) {
      throw ConfigError("'planner' must be a string");
    }
    const std::string name = root.at("planner").get<std::string>();
    if (name == "weighted") s.planner = PlannerKind::kWeighted;
    else if (name == "lasso") s.planner = PlannerKind::kLasso;
    else {
      throw ConfigError("unknown planner '" + name +
                        "' (valid: weighted, lasso)");
    }
  }

  if (root.contains("weighted")) {
    const Json& w = root.at("weighted");
    reject_unknown_keys(w, {"alpha", "beta", "minus_form"}, "weighted");
    if (w.contains("beta") && !w.contains("alpha")) {
      s.weighted = WeightedParams::from_beta(w.at("beta").get<double>());
    } else {
      s.weighted.alpha = get_number(w, "alpha", s.weighted.alpha);
      s.weighted.beta = get_number(w, "beta", s.weighted.beta);
    }
    s.weighted.minus_form = get_bool(w, "minus_form", false);
    s.weighted.validate();
  }

  if (root.contains("lasso")) {
    const Json& l = root.at("lasso");
    reject_unknown_keys(l,
                        {"height_raise_m", "arrival_radius_m", "max_steps",
                         "speed_floor_ms", "raw_axis_mode"},
                        "lasso");
    s.lasso.height_raise_m =
        get_number(l, "height_raise_m", s.lasso.height_raise_m);
    s.lasso.arrival_radius_m =
        get_number(l, "arrival_radius_m", s.lasso.arrival_radius_m);
    if (l.contains("max_steps")) {
      if (!l.at("max_steps").is_number_unsigned() ||
          l.at("max_steps").get<std::uint64_t>() == 0) {
        throw ConfigError("'max_steps' must be a positive integer");
      }
      s.lasso.max_steps = l.at("max_steps").get<std::size_t>();
    }
    s.lasso.speed_floor_ms =
        get_number(l, "speed_floor_ms", s.lasso.speed_floor_ms);
    s.lasso.raw_axis_mode = get_bool(l, "raw_axis_mode", false);
    s.lasso.validate();
  }

  if (root.contains("gamma_forward")) {
    s.gamma_forward = parse_gamma(root.at("gamma_forward"), "gamma_forward");
  }
  if (root.contains("gamma_backward")) {
    s.gamma_backward =
        parse_gamma(root.at("gamma_backward"), "gamma_backward");
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_json(buffer.str());
}

std::string scenario_to_json(const Scenario& s) {
  Json legs = Json::array();
  for (const FlightLeg& leg : s.script.legs) {
    Json j;
    j["vx_ms"] = leg.velocity_cmd.north;
    j["vy_ms"] = leg.velocity_cmd.east;
    j["duration_s"] = leg.duration_s;
    j["height_m"] = leg.target_height_m;
    if (leg.yaw_policy == YawPolicy::kFaceVelocity) {
      j["yaw"] = "face-velocity";
    } else {
      j["yaw"] = leg.fixed_yaw_deg;
    }
    legs.push_back(j);
  }

  Json root;
  root["id"] = s.id;
  root["seed"] = s.seed;
  root["repetitions"] = s.repetitions;
  root["timing"] = s.measure_timing;
  root["script"] = {{"radius_limit_m", s.script.radius_limit_m},
                    {"legs", legs}};
  root["field"] = {{"model", model_name(s.field.model)},
                   {"mean_north_ms", s.field.mean.north},
                   {"mean_east_ms", s.field.mean.east},
                   {"gust_amplitude_ms", s.field.gust_amplitude},
                   {"gust_period_s", s.field.gust_period_s},
                   {"reversion_rate", s.field.reversion_rate},
                   {"noise_scale", s.field.noise_scale},
                   {"init_north_ms", s.field.init.north},
                   {"init_east_ms", s.field.init.east},
                   {"process_dt_s", s.field.process_dt},
                   {"magnitude_cap_ms", s.field.magnitude_cap}};
  root["plant"] = {{"compensation", s.plant.compensation},
                   {"max_speed_ms", s.plant.max_speed_ms},
                   {"apparent_wind_sensing", s.plant.apparent_wind_sensing},
                   {"sample_dt_s", s.plant.sample_dt},
                   {"climb_rate_ms", s.plant.climb_rate_ms}};
  root["planner"] =
      (s.planner == PlannerKind::kWeighted) ? "weighted" : "lasso";
  root["weighted"] = {{"alpha", s.weighted.alpha},
                      {"beta", s.weighted.beta},
                      {"minus_form", s.weighted.minus_form}};
  root["lasso"] = {{"height_raise_m", s.lasso.height_raise_m},
                   {"arrival_radius_m", s.lasso.arrival_radius_m},
                   {"max_steps", s.lasso.max_steps},
                   {"speed_floor_ms", s.lasso.speed_floor_ms},
                   {"raw_axis_mode", s.lasso.raw_axis_mode}};
  root["gamma_forward"] = {{"lo", s.gamma_forward.lo},
                           {"hi", s.gamma_forward.hi}};
  root["gamma_backward"] = {{"lo", s.gamma_backward.lo},
                            {"hi", s.gamma_backward.hi}};
  return root.dump(2) + "\n";
}

}  // namespace windward
