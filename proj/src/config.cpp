// Copyright 2026 The aebsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aebsim/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <type_traits>

#include "aebsim/error.hpp"

namespace aebsim
{

namespace
{

template <class T, class F>
void fields(T & c, F && f);

template <class F>
void fields(ActuatorModel & c, F && f)
{
  f("tau", c.tau);
  f("a_min", c.a_min);
  f("a_max", c.a_max);
}

template <class F>
void fields(SensorConfig & c, F && f)
{
  f("range_max", c.range_max);
  f("range_noise_sigma", c.range_noise_sigma);
  f("base_drop_prob", c.base_drop_prob);
  f("frame_rate", c.frame_rate);
  f("lateral_noise_sigma", c.lateral_noise_sigma);
  f("length_noise_sigma", c.length_noise_sigma);
  f("lane_threshold", c.lane_threshold);
}

template <class F>
void fields(TrackerConfig & c, F && f)
{
  f("gate_radius", c.gate_radius);
  f("drop_after_missed", c.drop_after_missed);
  f("alpha", c.alpha);
  f("beta", c.beta);
  f("confirm_frames", c.confirm_frames);
  f("lane_gate", c.lane_gate);
  f("length_tolerance", c.length_tolerance);
  f("lateral_gain", c.lateral_gain);
  f("lane_threshold", c.lane_threshold);
}

template <class F>
void fields(AccConfig & c, F && f)
{
  f("time_gap", c.time_gap);
  f("d0", c.d0);
  f("k_gap", c.k_gap);
  f("k_rel", c.k_rel);
  f("k_speed", c.k_speed);
  f("v_set", c.v_set);
  f("a_lo", c.a_lo);
  f("a_hi", c.a_hi);
  f("standstill_release", c.standstill_release);
}

template <class F>
void fields(AebConfig & c, F && f)
{
  f("ttc_threshold", c.ttc_threshold);
  f("a_hard", c.a_hard);
  f("a_eb_floor", c.a_eb_floor);
  f("d_margin", c.d_margin);
  f("release_factor", c.release_factor);
  f("min_hold", c.min_hold);
  f("min_speed", c.min_speed);
}

template <class F>
void fields(SafeguardConfig & c, F && f)
{
  f("persistence", c.persistence);
  f("rate_limit", c.rate_limit);
  f("fallback_decel", c.fallback_decel);
  f("fallback_speed_cap", c.fallback_speed_cap);
  f("persistence_frames", c.persistence_frames);
  f("jerk_limit_apply", c.jerk_limit_apply);
  f("jerk_limit_release", c.jerk_limit_release);
  f("instability_window", c.instability_window);
  f("instability_threshold", c.instability_threshold);
  f("fallback_decel_cap", c.fallback_decel_cap);
  f("fallback_speed_cap_factor", c.fallback_speed_cap_factor);
}

template <class F>
void fields(PipelineConfig & c, F && f)
{
  f("actuator", c.actuator);
  f("sensor", c.sensor);
  f("tracker", c.tracker);
  f("acc", c.acc);
  f("aeb", c.aeb);
  f("lane_overlap_threshold", c.lane_overlap_threshold);
  f("standstill_stop", c.standstill_stop);
}

template <class F>
void fields(ScenarioCalibration & c, F && f)
{
  f("duration", c.duration);
  f("lane_width", c.lane_width);
  f("nominal_time_gap", c.nominal_time_gap);
  f("nominal_d0", c.nominal_d0);
  f("highway_ego_speed", c.highway_ego_speed);
  f("highway_gap_scale", c.highway_gap_scale);
  f("highway_gap_clip", c.highway_gap_clip);
  f("set_speed_margin", c.set_speed_margin);
  f("hazard_prob", c.hazard_prob);
  f("hazard_time", c.hazard_time);
  f("hazard_decel", c.hazard_decel);
  f("hazard_speed_fraction", c.hazard_speed_fraction);
  f("hazard_hold", c.hazard_hold);
  f("slowdown_decel", c.slowdown_decel);
  f("slowdown_drop", c.slowdown_drop);
  f("slowdown_hold", c.slowdown_hold);
  f("recover_accel", c.recover_accel);
  f("traffic_jerk", c.traffic_jerk);
  f("stopgo_top_speed", c.stopgo_top_speed);
  f("stopgo_accel", c.stopgo_accel);
  f("stopgo_decel", c.stopgo_decel);
  f("stopgo_stop_hold", c.stopgo_stop_hold);
  f("stopgo_cruise_hold", c.stopgo_cruise_hold);
  f("cutin_ego_speed", c.cutin_ego_speed);
  f("cutin_gap", c.cutin_gap);
  f("cutin_restore_time", c.cutin_restore_time);
  f("cutin_time", c.cutin_time);
  f("cutin_duration", c.cutin_duration);
  f("cutin_aggressiveness", c.cutin_aggressiveness);
  f("cutin_max_brake", c.cutin_max_brake);
  f("cutin_max_slowdown", c.cutin_max_slowdown);
  f("cutin_settle_decel", c.cutin_settle_decel);
  f("cutin_brake_delay", c.cutin_brake_delay);
  f("parked_ego_speed", c.parked_ego_speed);
  f("parked_gap", c.parked_gap);
  f("parked_lane_offset", c.parked_lane_offset);
  f("curvature_kappa", c.curvature_kappa);
  f("curved_lateral_sigma", c.curved_lateral_sigma);
  f("multi_second_lead_spacing", c.multi_second_lead_spacing);
  f("multi_adjacent_gap", c.multi_adjacent_gap);
  f("multi_adjacent_speed_delta", c.multi_adjacent_speed_delta);
  f("follower_time_gap", c.follower_time_gap);
  f("follower_reaction", c.follower_reaction);
}

template <class T>
void write_fields(Json & j, const T & c)
{
  j = Json::object();
  fields(const_cast<T &>(c), [&](const char * key, const auto & v) { j[key] = v; });
}

template <class T>
void read_fields(const Json & j, T & c, const char * what)
{
  if (!j.is_object()) {
    throw ConfigError(std::string(what) + ": expected an object");
  }
  std::set<std::string> known;
  fields(c, [&](const char * key, auto & v) {
    known.insert(key);
    const auto it = j.find(key);
    if (it == j.end()) {
      return;
    }
    try {
      v = it->template get<std::decay_t<decltype(v)>>();
    } catch (const nlohmann::json::exception & e) {
      throw ConfigError(std::string(what) + "." + key + ": " + e.what());
    }
  });
  for (const auto & item : j.items()) {
    if (known.count(item.key()) == 0) {
      throw ConfigError(std::string(what) + ": unknown key '" + item.key() + "'");
    }
  }
}

void check_keys(const Json & j, std::initializer_list<const char *> keys, const char * what)
{
  if (!j.is_object()) {
    throw ConfigError(std::string(what) + ": expected an object");
  }
  for (const auto & item : j.items()) {
    bool ok = false;
    for (const char * k : keys) {
      ok = ok || item.key() == k;
    }
    if (!ok) {
      throw ConfigError(std::string(what) + ": unknown key '" + item.key() + "'");
    }
  }
}

std::string anchor_name(Anchor a)
{
  switch (a) {
    case Anchor::kHazard:
      return "hazard";
    case Anchor::kTruthTtc:
      return "ttc";
    case Anchor::kAbsolute:
      break;
  }
  return "absolute";
}

Anchor parse_anchor(const std::string & s)
{
  if (s == "hazard") {
    return Anchor::kHazard;
  }
  if (s == "absolute") {
    return Anchor::kAbsolute;
  }
  if (s == "ttc") {
    return Anchor::kTruthTtc;
  }
  throw ConfigError("unknown window anchor '" + s + "'");
}

std::string pattern_name(FlickerPattern p)
{
  return p == FlickerPattern::kDropProbability ? "drop_probability" : "alternate_frames";
}

FlickerPattern parse_pattern(const std::string & s)
{
  if (s == "alternate_frames") {
    return FlickerPattern::kAlternateFrames;
  }
  if (s == "drop_probability") {
    return FlickerPattern::kDropProbability;
  }
  throw ConfigError("unknown flicker pattern '" + s + "'");
}

std::vector<ScenarioFamily> parse_families(const Json & j)
{
  std::vector<ScenarioFamily> out;
  for (const auto & f : j) {
    out.push_back(parse_family(f.get<std::string>()));
  }
  return out;
}

Json families_json(const std::vector<ScenarioFamily> & families)
{
  Json j = Json::array();
  for (auto f : families) {
    j.push_back(std::string(to_string(f)));
  }
  return j;
}

template <class T>
void read_value(const Json & j, const char * key, T & out, const char * what)
{
  const auto it = j.find(key);
  if (it == j.end()) {
    return;
  }
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception & e) {
    throw ConfigError(std::string(what) + "." + key + ": " + e.what());
  }
}

}  // namespace

Json number_to_json(double x)
{
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  return x;
}

double number_from_json(const Json & j)
{
  if (j.is_number()) {
    return j.get<double>();
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
      return -std::numeric_limits<double>::infinity();
    }
    if (s == "nan") {
      return std::numeric_limits<double>::quiet_NaN();
    }
  }
  throw FormatError("expected a number, got " + j.dump());
}

void to_json(Json & j, const Range & r)
{
  j = r.lo == r.hi ? number_to_json(r.lo) : Json::array({number_to_json(r.lo), number_to_json(r.hi)});
}

void from_json(const Json & j, Range & r)
{
  try {
    if (j.is_array()) {
      if (j.size() != 2) {
        throw ConfigError("range: expected [lo, hi]");
      }
      r = {number_from_json(j[0]), number_from_json(j[1])};
    } else {
      r = Range::constant(number_from_json(j));
    }
  } catch (const FormatError & e) {
    throw ConfigError(std::string("range: ") + e.what());
  }
  if (r.lo > r.hi) {
    throw ConfigError("range: lo > hi");
  }
}

void to_json(Json & j, const AttackWindow & w)
{
  j = {{"anchor", anchor_name(w.anchor)}, {"start", w.start}, {"duration", w.duration}};
  if (w.anchor == Anchor::kTruthTtc) {
    j["trigger_ttc"] = w.trigger_ttc;
  }
}

void from_json(const Json & j, AttackWindow & w)
{
  check_keys(j, {"anchor", "start", "duration", "trigger_ttc"}, "window");
  w = AttackWindow{};
  if (j.contains("anchor")) {
    w.anchor = parse_anchor(j.at("anchor").get<std::string>());
  }
  read_value(j, "start", w.start, "window");
  read_value(j, "duration", w.duration, "window");
  read_value(j, "trigger_ttc", w.trigger_ttc, "window");
}

void to_json(Json & j, const AttackSpec & a)
{
  j = Json::object();
  j["type"] = std::string(attack_name(a));
  if (const auto * fn = std::get_if<FalseNegativeAttack>(&a)) {
    j["window"] = fn->window;
  } else if (const auto * fp = std::get_if<FalsePositiveAttack>(&a)) {
    j["window"] = fp->window;
    j["phantom_gap"] = fp->phantom_gap;
    j["phantom_rel_speed"] = fp->phantom_rel_speed;
    j["phantom_length"] = fp->phantom_length;
    j["phantom_confidence"] = fp->phantom_confidence;
  } else if (const auto * b = std::get_if<DistanceBiasAttack>(&a)) {
    j["factor"] = b->factor;
    j["window"] = b->window ? Json(*b->window) : Json(nullptr);
    j["ramp"] = b->ramp;
  } else if (const auto * fl = std::get_if<FlickerAttack>(&a)) {
    j["window"] = fl->window;
    j["pattern"] = pattern_name(fl->pattern);
    j["drop_prob"] = fl->drop_prob;
  }
}

void from_json(const Json & j, AttackSpec & a)
{
  if (j.is_null()) {
    a = std::monostate{};
    return;
  }
  if (!j.is_object() || !j.contains("type")) {
    throw ConfigError("attack: expected an object with a 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  if (type == "none") {
    check_keys(j, {"type"}, "attack");
    a = std::monostate{};
  } else if (type == "false_negative") {
    check_keys(j, {"type", "window"}, "attack");
    FalseNegativeAttack fn;
    read_value(j, "window", fn.window, "attack");
    a = fn;
  } else if (type == "false_positive") {
    check_keys(
      j, {"type", "window", "phantom_gap", "phantom_rel_speed", "phantom_length", "phantom_confidence"},
      "attack");
    FalsePositiveAttack fp;
    read_value(j, "window", fp.window, "attack");
    read_value(j, "phantom_gap", fp.phantom_gap, "attack");
    read_value(j, "phantom_rel_speed", fp.phantom_rel_speed, "attack");
    read_value(j, "phantom_length", fp.phantom_length, "attack");
    read_value(j, "phantom_confidence", fp.phantom_confidence, "attack");
    a = fp;
  } else if (type == "distance_bias") {
    check_keys(j, {"type", "factor", "window", "ramp"}, "attack");
    DistanceBiasAttack b;
    read_value(j, "factor", b.factor, "attack");
    if (j.contains("window") && !j.at("window").is_null()) {
      b.window = j.at("window").get<AttackWindow>();
    }
    read_value(j, "ramp", b.ramp, "attack");
    a = b;
  } else if (type == "flicker") {
    check_keys(j, {"type", "window", "pattern", "drop_prob"}, "attack");
    FlickerAttack fl;
    read_value(j, "window", fl.window, "attack");
    if (j.contains("pattern")) {
      fl.pattern = parse_pattern(j.at("pattern").get<std::string>());
    }
    read_value(j, "drop_prob", fl.drop_prob, "attack");
    a = fl;
  } else {
    throw ConfigError("attack: unknown type '" + type + "'");
  }
  validate(a);
}

void to_json(Json & j, const ActuatorModel & c) { write_fields(j, c); }
void from_json(const Json & j, ActuatorModel & c) { read_fields(j, c, "actuator"); }
void to_json(Json & j, const SensorConfig & c) { write_fields(j, c); }
void from_json(const Json & j, SensorConfig & c) { read_fields(j, c, "sensor"); }
void to_json(Json & j, const TrackerConfig & c) { write_fields(j, c); }
void from_json(const Json & j, TrackerConfig & c) { read_fields(j, c, "tracker"); }
void to_json(Json & j, const AccConfig & c) { write_fields(j, c); }
void from_json(const Json & j, AccConfig & c) { read_fields(j, c, "acc"); }
void to_json(Json & j, const AebConfig & c) { write_fields(j, c); }
void from_json(const Json & j, AebConfig & c) { read_fields(j, c, "aeb"); }
void to_json(Json & j, const SafeguardConfig & c) { write_fields(j, c); }
void from_json(const Json & j, SafeguardConfig & c) { read_fields(j, c, "safeguards"); }
void to_json(Json & j, const PipelineConfig & c) { write_fields(j, c); }
void from_json(const Json & j, PipelineConfig & c) { read_fields(j, c, "pipeline"); }
void to_json(Json & j, const ScenarioCalibration & c) { write_fields(j, c); }
void from_json(const Json & j, ScenarioCalibration & c) { read_fields(j, c, "calibration"); }

void to_json(Json & j, const Condition & c)
{
  j = {{"label", c.label}, {"attack", c.attack}, {"safeguards", c.safeguards}};
  if (!c.families.empty()) {
    j["families"] = families_json(c.families);
  }
}

void from_json(const Json & j, Condition & c)
{
  check_keys(j, {"label", "attack", "safeguards", "families"}, "condition");
  c = Condition{};
  if (!j.contains("label")) {
    throw ConfigError("condition: missing label");
  }
  c.label = j.at("label").get<std::string>();
  read_value(j, "attack", c.attack, "condition");
  read_value(j, "safeguards", c.safeguards, "condition");
  if (j.contains("families")) {
    c.families = parse_families(j.at("families"));
  }
}

void to_json(Json & j, const Assertion & a)
{
  j = {{"family", a.family}, {"condition", a.condition}, {"metric", a.metric}, {"op", a.op},
       {"value", a.value}};
}

void from_json(const Json & j, Assertion & a)
{
  check_keys(j, {"family", "condition", "metric", "op", "value"}, "assertion");
  a = Assertion{};
  a.family = "*";
  read_value(j, "family", a.family, "assertion");
  read_value(j, "condition", a.condition, "assertion");
  read_value(j, "metric", a.metric, "assertion");
  read_value(j, "op", a.op, "assertion");
  read_value(j, "value", a.value, "assertion");
}

void to_json(Json & j, const ExperimentConfig & c)
{
  j = Json::object();
  j["name"] = c.name;
  j["families"] = families_json(c.families);
  j["runs_per_family"] = c.runs_per_family;
  j["conditions"] = c.conditions;
  j["root_seed"] = c.root_seed;
  j["output_dir"] = c.output_dir.string();
  j["verbosity"] = c.verbosity == Verbosity::kFull ? "full" : "metrics";
  j["parallelism"] = c.parallelism;
  j["pipeline"] = c.pipeline;
  j["calibration"] = c.calibration;
  j["assertions"] = c.assertions;
}

void from_json(const Json & j, ExperimentConfig & c)
{
  check_keys(
    j,
    {"name", "families", "runs_per_family", "conditions", "root_seed", "output_dir", "verbosity",
     "parallelism", "pipeline", "calibration", "assertions", "description"},
    "experiment");
  c = ExperimentConfig{};
  read_value(j, "name", c.name, "experiment");
  if (j.contains("families")) {
    c.families = parse_families(j.at("families"));
  }
  read_value(j, "runs_per_family", c.runs_per_family, "experiment");
  read_value(j, "conditions", c.conditions, "experiment");
  read_value(j, "root_seed", c.root_seed, "experiment");
  if (j.contains("output_dir")) {
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("verbosity")) {
    const auto v = j.at("verbosity").get<std::string>();
    if (v == "full") {
      c.verbosity = Verbosity::kFull;
    } else if (v == "metrics") {
      c.verbosity = Verbosity::kMetricsOnly;
    } else {
      throw ConfigError("experiment: verbosity must be 'full' or 'metrics'");
    }
  }
  read_value(j, "parallelism", c.parallelism, "experiment");
  read_value(j, "pipeline", c.pipeline, "experiment");
  read_value(j, "calibration", c.calibration, "experiment");
  read_value(j, "assertions", c.assertions, "experiment");
}

ExperimentConfig parse_experiment(const Json & j)
{
  ExperimentConfig c;
  try {
    c = j.get<ExperimentConfig>();
  } catch (const nlohmann::json::exception & e) {
    throw ConfigError(std::string("experiment: ") + e.what());
  }
  c.validate();
  return c;
}

Json read_json_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error & e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Json read_experiment_json(const std::filesystem::path & path)
{
  Json j = read_json_file(path);
  if (!j.is_object() || !j.contains("calibration_file")) {
    return j;
  }
  const auto ref = std::filesystem::path(j.at("calibration_file").get<std::string>());
  const Json file = read_json_file(ref.is_absolute() ? ref : path.parent_path() / ref);
  check_keys(file, {"version", "description", "calibration"}, "calibration file");
  if (!file.contains("calibration") || !file.at("calibration").is_object()) {
    throw ConfigError("calibration file: missing 'calibration' object");
  }
  Json calibration = file.at("calibration");
  if (j.contains("calibration")) {
    calibration.merge_patch(j.at("calibration"));
  }
  j["calibration"] = std::move(calibration);
  j.erase("calibration_file");
  return j;
}

ExperimentConfig load_experiment(const std::filesystem::path & path)
{
  return parse_experiment(read_experiment_json(path));
}

void apply_override(Json & j, const std::string & pointer, const Json & value)
{
  try {
    j[Json::json_pointer(pointer)] = value;
  } catch (const nlohmann::json::exception & e) {
    throw ConfigError("override " + pointer + ": " + e.what());
  }
}

namespace
{

Json optional_number(const std::optional<double> & v)
{
  return v ? number_to_json(*v) : Json(nullptr);
}

std::optional<double> optional_number_from(const Json & j, const char * key)
{
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    return std::nullopt;
  }
  return number_from_json(*it);
}

Json number_list(const std::vector<double> & values)
{
  Json out = Json::array();
  for (double v : values) {
    out.push_back(number_to_json(v));
  }
  return out;
}

std::vector<double> number_list_from(const Json & j)
{
  std::vector<double> out;
  for (const auto & v : j) {
    out.push_back(number_from_json(v));
  }
  return out;
}

}  // namespace

Json metrics_to_json(const RunMetrics & m)
{
  return {
    {"collision", m.collision},
    {"collision_time", number_to_json(m.collision_time)},
    {"impact_speed", number_to_json(m.impact_speed)},
    {"min_gap", number_to_json(m.min_gap)},
    {"min_ttc_truth", number_to_json(m.min_ttc_truth)},
    {"min_ttc_perceived", number_to_json(m.min_ttc_perceived)},
    {"eb_event_count", m.eb_event_count},
    {"false_eb_count", m.false_eb_count},
    {"peak_decel", number_to_json(m.peak_decel)},
    {"peak_jerk", number_to_json(m.peak_jerk)},
    {"mean_abs_jerk", number_to_json(m.mean_abs_jerk)},
    {"oscillatory_window_count", m.oscillatory_window_count},
    {"oscillatory", m.oscillatory},
    {"brake_onset_delay", optional_number(m.brake_onset_delay)},
    {"early_brake", m.early_brake},
    {"mean_speed", number_to_json(m.mean_speed)},
    {"travel_time", number_to_json(m.travel_time)},
    {"min_follower_headway", optional_number(m.min_follower_headway)},
    {"follower_headway_after_false_eb", optional_number(m.follower_headway_after_false_eb)},
    {"eb_onset_truth_ttc", number_list(m.eb_onset_truth_ttc)},
    {"eb_peak_decels", number_list(m.eb_peak_decels)},
    {"false_eb_peak_decels", number_list(m.false_eb_peak_decels)},
  };
}

RunMetrics metrics_from_json(const Json & j)
{
  try {
    RunMetrics m;
    m.collision = j.at("collision").get<bool>();
    m.collision_time = number_from_json(j.at("collision_time"));
    m.impact_speed = number_from_json(j.at("impact_speed"));
    m.min_gap = number_from_json(j.at("min_gap"));
    m.min_ttc_truth = number_from_json(j.at("min_ttc_truth"));
    m.min_ttc_perceived = number_from_json(j.at("min_ttc_perceived"));
    m.eb_event_count = j.at("eb_event_count").get<int>();
    m.false_eb_count = j.at("false_eb_count").get<int>();
    m.peak_decel = number_from_json(j.at("peak_decel"));
    m.peak_jerk = number_from_json(j.at("peak_jerk"));
    m.mean_abs_jerk = number_from_json(j.at("mean_abs_jerk"));
    m.oscillatory_window_count = j.at("oscillatory_window_count").get<int>();
    m.oscillatory = j.at("oscillatory").get<bool>();
    m.brake_onset_delay = optional_number_from(j, "brake_onset_delay");
    m.early_brake = j.at("early_brake").get<bool>();
    m.mean_speed = number_from_json(j.at("mean_speed"));
    m.travel_time = number_from_json(j.at("travel_time"));
    m.min_follower_headway = optional_number_from(j, "min_follower_headway");
    m.follower_headway_after_false_eb = optional_number_from(j, "follower_headway_after_false_eb");
    m.eb_onset_truth_ttc = number_list_from(j.at("eb_onset_truth_ttc"));
    m.eb_peak_decels = number_list_from(j.at("eb_peak_decels"));
    m.false_eb_peak_decels = number_list_from(j.at("false_eb_peak_decels"));
    return m;
  } catch (const nlohmann::json::exception & e) {
    throw FormatError(std::string("metrics record: ") + e.what());
  }
}

Json record_to_json(const RunRecord & r)
{
  Json params = Json::object();
  for (const auto & [k, v] : r.params) {
    params[k] = number_to_json(v);
  }
  return {
    {"family", r.family},
    {"seed", r.seed},
    {"run_index", r.run_index},
    {"condition", r.condition},
    {"metrics", r.metrics ? metrics_to_json(*r.metrics) : Json(nullptr)},
    {"error", r.error},
    {"params", params},
    {"version", r.version},
  };
}

RunRecord record_from_json(const Json & j)
{
  try {
    RunRecord r;
    r.family = j.at("family").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.run_index = j.at("run_index").get<int>();
    r.condition = j.at("condition").get<std::string>();
    if (!j.at("metrics").is_null()) {
      r.metrics = metrics_from_json(j.at("metrics"));
    }
    r.error = j.value("error", "");
    for (const auto & item : j.at("params").items()) {
      r.params.emplace_back(item.key(), number_from_json(item.value()));
    }
    r.version = j.value("version", "");
    return r;
  } catch (const nlohmann::json::exception & e) {
    throw FormatError(std::string("run record: ") + e.what());
  }
}

}  // namespace aebsim
