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

#include "aebsim/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "aebsim/error.hpp"
#include "aebsim/rng.hpp"

namespace aebsim
{

std::string_view to_string(ScenarioFamily family)
{
  switch (family) {
    case ScenarioFamily::kHighwayFollowing:
      return "HighwayFollowing";
    case ScenarioFamily::kStopAndGo:
      return "StopAndGo";
    case ScenarioFamily::kCutIn:
      return "CutIn";
    case ScenarioFamily::kParkedVehicle:
      return "ParkedVehicle";
    case ScenarioFamily::kCurvedRoad:
      return "CurvedRoad";
    case ScenarioFamily::kMultiVehicle:
      return "MultiVehicle";
  }
  return "unknown";
}

ScenarioFamily parse_family(std::string_view name)
{
  for (auto f : kAllFamilies) {
    if (to_string(f) == name) {
      return f;
    }
  }
  throw ConfigError("unknown scenario family '" + std::string(name) + "'");
}

int family_ordinal(ScenarioFamily family)
{
  return static_cast<int>(family);
}

void ScenarioCalibration::validate() const
{
  if (!(duration > 0.0) || !(lane_width > 0.0) || hazard_prob < 0.0 || hazard_prob > 1.0 ||
      !(nominal_time_gap > 0.0) || !(cutin_restore_time.lo > 0.0) ||
      !(cutin_settle_decel > 0.0) || cutin_max_slowdown < 0.0 || cutin_max_slowdown >= 1.0 ||
      !(traffic_jerk > 0.0)) {
    throw ConfigError("scenario calibration: invalid scalar parameter");
  }
  for (const Range * r :
       {&highway_ego_speed, &highway_gap_scale, &highway_gap_clip, &set_speed_margin, &hazard_time,
        &hazard_decel, &hazard_speed_fraction, &hazard_hold, &slowdown_decel, &slowdown_drop,
        &slowdown_hold, &stopgo_top_speed, &stopgo_accel, &stopgo_decel, &stopgo_stop_hold,
        &stopgo_cruise_hold, &cutin_ego_speed, &cutin_gap, &cutin_restore_time, &cutin_time,
        &cutin_duration, &cutin_aggressiveness, &cutin_brake_delay, &parked_ego_speed, &parked_gap,
        &parked_lane_offset, &multi_second_lead_spacing, &multi_adjacent_gap,
        &multi_adjacent_speed_delta, &follower_time_gap}) {
    if (!(r->lo <= r->hi) || !std::isfinite(r->lo) || !std::isfinite(r->hi)) {
      throw ConfigError("scenario calibration: range with lo > hi");
    }
  }
}

namespace
{

constexpr int kStopGoCycles = 4;

double spacing(const ScenarioCalibration & cal, double v)
{
  return cal.nominal_d0 + cal.nominal_time_gap * v;
}

void sample_highway(ScenarioParams & p, const ScenarioCalibration & cal, Rng & rng)
{
  p.ego_speed = cal.highway_ego_speed.draw(rng);
  p.lead_speed = p.ego_speed;
  p.set_speed = p.ego_speed + cal.set_speed_margin.draw(rng);
  p.lead_gap = std::clamp(
    spacing(cal, p.ego_speed) * cal.highway_gap_scale.draw(rng), cal.highway_gap_clip.lo,
    cal.highway_gap_clip.hi);
  // Fixed draw order regardless of the hazard outcome.
  p.hazard = rng.bernoulli(cal.hazard_prob);
  p.event_time = cal.hazard_time.draw(rng);
  const double hazard_decel = cal.hazard_decel.draw(rng);
  const double hazard_target = p.lead_speed * cal.hazard_speed_fraction.draw(rng);
  const double hazard_hold = cal.hazard_hold.draw(rng);
  const double slow_decel = cal.slowdown_decel.draw(rng);
  const double slow_target = p.lead_speed - cal.slowdown_drop.draw(rng);
  const double slow_hold = cal.slowdown_hold.draw(rng);
  if (p.hazard) {
    p.event_decel = hazard_decel;
    p.event_target_speed = hazard_target;
    p.event_hold = hazard_hold;
  } else {
    p.event_decel = slow_decel;
    p.event_target_speed = slow_target;
    p.event_hold = slow_hold;
  }
}

}  // namespace

ScenarioSpec sample(ScenarioFamily family, std::uint64_t seed, const ScenarioCalibration & cal)
{
  cal.validate();
  ScenarioSpec spec;
  spec.family = family;
  spec.seed = seed;
  spec.duration = cal.duration;
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::kScenario)}));
  ScenarioParams & p = spec.params;

  switch (family) {
    case ScenarioFamily::kHighwayFollowing:
    case ScenarioFamily::kCurvedRoad:
      sample_highway(p, cal, rng);
      break;

    case ScenarioFamily::kStopAndGo: {
      p.top_speed = cal.stopgo_top_speed.draw(rng);
      p.ego_speed = p.top_speed;
      p.lead_speed = p.top_speed;
      p.set_speed = p.top_speed + 1.0;
      p.lead_gap = spacing(cal, p.ego_speed) * cal.highway_gap_scale.draw(rng);
      p.go_accel = cal.stopgo_accel.draw(rng);
      p.event_decel = cal.stopgo_decel.draw(rng);
      for (int i = 0; i < kStopGoCycles; ++i) {
        p.cruise_holds.push_back(cal.stopgo_cruise_hold.draw(rng));
        p.stop_holds.push_back(cal.stopgo_stop_hold.draw(rng));
      }
      p.event_time = p.cruise_holds.front();
      break;
    }

    case ScenarioFamily::kCutIn: {
      // Ego cruises at its set speed in an open lane until the merge.
      p.ego_speed = cal.cutin_ego_speed.draw(rng);
      p.set_speed = p.ego_speed;
      const double nominal = spacing(cal, p.ego_speed);
      p.cutin_gap = cal.cutin_gap.draw(rng);
      p.cutin_speed = p.ego_speed + (nominal - p.cutin_gap) / cal.cutin_restore_time.draw(rng);
      p.cutin_time = cal.cutin_time.draw(rng);
      p.cutin_duration = cal.cutin_duration.draw(rng);
      p.cutin_aggressiveness = cal.cutin_aggressiveness.draw(rng);
      p.cutin_brake_delay = cal.cutin_brake_delay.draw(rng);
      p.lead_gap = p.cutin_gap;
      p.lead_speed = p.cutin_speed;
      p.event_time = p.cutin_time;
      break;
    }

    case ScenarioFamily::kParkedVehicle: {
      p.ego_speed = cal.parked_ego_speed.draw(rng);
      p.set_speed = p.ego_speed;
      p.lead_gap = cal.parked_gap.draw(rng);
      p.lead_speed = 0.0;
      p.parked_lane_offset = cal.parked_lane_offset.draw(rng);
      p.event_time = std::max(1.0, (p.lead_gap - 3.0 * p.ego_speed) / p.ego_speed);
      break;
    }

    case ScenarioFamily::kMultiVehicle: {
      p.ego_speed = cal.highway_ego_speed.draw(rng);
      p.lead_speed = p.ego_speed;
      p.set_speed = p.ego_speed + cal.set_speed_margin.draw(rng);
      p.lead_gap = std::clamp(
        spacing(cal, p.ego_speed) * cal.highway_gap_scale.draw(rng), cal.highway_gap_clip.lo,
        cal.highway_gap_clip.hi);
      p.event_time = cal.hazard_time.draw(rng);
      p.event_decel = cal.slowdown_decel.draw(rng);
      p.event_target_speed = p.lead_speed - cal.slowdown_drop.draw(rng);
      p.event_hold = cal.slowdown_hold.draw(rng);
      p.second_lead_spacing = cal.multi_second_lead_spacing.draw(rng);
      p.adjacent_gap = cal.multi_adjacent_gap.draw(rng);
      p.adjacent_speed = p.ego_speed + cal.multi_adjacent_speed_delta.draw(rng);
      p.follower_time_gap = cal.follower_time_gap.draw(rng);
      break;
    }
  }
  return spec;
}

std::vector<std::pair<std::string, double>> echo_params(const ScenarioSpec & spec)
{
  const auto & p = spec.params;
  std::vector<std::pair<std::string, double>> out{
    {"ego_speed", p.ego_speed}, {"set_speed", p.set_speed}, {"lead_gap", p.lead_gap}};
  switch (spec.family) {
    case ScenarioFamily::kHighwayFollowing:
    case ScenarioFamily::kCurvedRoad:
      out.insert(out.end(), {{"hazard", p.hazard ? 1.0 : 0.0},
                             {"event_time", p.event_time},
                             {"event_decel", p.event_decel},
                             {"event_target_speed", p.event_target_speed},
                             {"event_hold", p.event_hold}});
      break;
    case ScenarioFamily::kStopAndGo:
      out.insert(out.end(), {{"top_speed", p.top_speed},
                             {"go_accel", p.go_accel},
                             {"stop_decel", p.event_decel},
                             {"first_stop_time", p.event_time}});
      break;
    case ScenarioFamily::kCutIn:
      out.insert(out.end(), {{"cutin_gap", p.cutin_gap},
                             {"cutin_speed", p.cutin_speed},
                             {"cutin_time", p.cutin_time},
                             {"cutin_duration", p.cutin_duration},
                             {"cutin_aggressiveness", p.cutin_aggressiveness},
                             {"cutin_brake_delay", p.cutin_brake_delay}});
      break;
    case ScenarioFamily::kParkedVehicle:
      out.insert(out.end(), {{"parked_lane_offset", p.parked_lane_offset}});
      break;
    case ScenarioFamily::kMultiVehicle:
      out.insert(out.end(), {{"event_time", p.event_time},
                             {"event_decel", p.event_decel},
                             {"event_target_speed", p.event_target_speed},
                             {"second_lead_spacing", p.second_lead_spacing},
                             {"adjacent_gap", p.adjacent_gap},
                             {"adjacent_speed", p.adjacent_speed},
                             {"follower_time_gap", p.follower_time_gap}});
      break;
  }
  return out;
}

namespace
{

/// Decel to a target, hold, then recover to the original speed.
std::vector<SpeedPhase> event_program(const ScenarioParams & p, double recover_accel, double jerk)
{
  std::vector<SpeedPhase> phases;
  if (p.event_decel <= 0.0) {
    return phases;
  }
  phases.push_back({p.event_time, p.event_decel, p.event_target_speed});
  const double reach =
    std::max(0.0, p.lead_speed - p.event_target_speed) / p.event_decel + p.event_decel / jerk;
  phases.push_back({p.event_time + reach + p.event_hold, recover_accel, p.lead_speed});
  return phases;
}

double travelled(const ObjectScript & script, double horizon)
{
  return script.at(horizon).s_rear - script.at(0.0).s_rear;
}

}  // namespace

ScenarioScripts build_scripts(const ScenarioSpec & spec, const ScenarioCalibration & cal)
{
  const auto & p = spec.params;
  const double horizon = spec.duration;
  ScenarioScripts out;
  out.ego_init.t = 0.0;
  out.ego_init.s_front = 0.0;
  out.ego_init.v = p.ego_speed;
  out.ego_init.a = 0.0;
  out.set_speed = p.set_speed;
  out.hazard_time = p.event_time;

  switch (spec.family) {
    case ScenarioFamily::kHighwayFollowing:
    case ScenarioFamily::kCurvedRoad: {
      out.objects.emplace_back(
        1, ObjectKind::kVehicle, 4.5,
        integrate_profile(p.lead_gap, p.lead_speed,
                          event_program(p, cal.recover_accel, cal.traffic_jerk), std::nullopt,
                          0.0, horizon, cal.traffic_jerk));
      if (spec.family == ScenarioFamily::kCurvedRoad) {
        out.curved = true;
        out.curvature_kappa = cal.curvature_kappa;
        out.extra_lateral_sigma = cal.curved_lateral_sigma;
      }
      out.route_length = 0.9 * travelled(out.objects.front(), horizon);
      break;
    }

    case ScenarioFamily::kStopAndGo: {
      std::vector<SpeedPhase> phases;
      double t = 0.0;
      for (std::size_t i = 0; i < p.cruise_holds.size(); ++i) {
        t += p.cruise_holds[i];
        phases.push_back({t, p.event_decel, 0.0});
        t += p.top_speed / p.event_decel + p.event_decel / cal.traffic_jerk + p.stop_holds[i];
        phases.push_back({t, p.go_accel, p.top_speed});
        t += p.top_speed / p.go_accel + p.go_accel / cal.traffic_jerk;
      }
      out.objects.emplace_back(
        1, ObjectKind::kVehicle, 4.5,
        integrate_profile(
          p.lead_gap, p.lead_speed, phases, std::nullopt, 0.0, horizon, cal.traffic_jerk));
      out.route_length = 0.9 * travelled(out.objects.front(), horizon);
      break;
    }

    case ScenarioFamily::kCutIn: {
      const double deficit = p.ego_speed - p.cutin_speed;
      const double gap0 = p.cutin_gap + deficit * p.cutin_time;
      const double merged = p.cutin_time + p.cutin_duration;
      // After the merge the car sheds speed; aggressive drivers brake harder and further.
      const double a = p.cutin_aggressiveness;
      const double brake = cal.cutin_settle_decel + a * (cal.cutin_max_brake - cal.cutin_settle_decel);
      const double target = p.ego_speed * (1.0 - a * cal.cutin_max_slowdown);
      std::vector<SpeedPhase> phases{{merged + p.cutin_brake_delay, brake, target}};
      out.objects.emplace_back(
        1, ObjectKind::kVehicle, 4.5,
        integrate_profile(gap0, p.cutin_speed, phases,
                          LaneChange{cal.lane_width, p.cutin_time, p.cutin_duration}, 0.0, horizon,
                          cal.traffic_jerk));
      out.route_length = 0.9 * travelled(out.objects.back(), horizon);
      break;
    }

    case ScenarioFamily::kParkedVehicle: {
      out.objects.emplace_back(
        1, ObjectKind::kParked, 4.5,
        integrate_profile(p.lead_gap, 0.0, {}, std::nullopt, p.parked_lane_offset, horizon));
      out.route_length = p.lead_gap - 10.0;
      break;
    }

    case ScenarioFamily::kMultiVehicle: {
      out.objects.emplace_back(
        1, ObjectKind::kVehicle, 4.5,
        integrate_profile(p.lead_gap, p.lead_speed,
                          event_program(p, cal.recover_accel, cal.traffic_jerk), std::nullopt,
                          0.0, horizon, cal.traffic_jerk));
      out.objects.emplace_back(
        2, ObjectKind::kVehicle, 4.5,
        integrate_profile(p.lead_gap + 4.5 + p.second_lead_spacing, p.lead_speed, {}, std::nullopt,
                          0.0, horizon));
      out.objects.emplace_back(
        3, ObjectKind::kVehicle, 4.5,
        integrate_profile(p.adjacent_gap, p.adjacent_speed, {}, std::nullopt, cal.lane_width,
                          horizon));
      FollowerSetup follower;
      follower.v0 = p.ego_speed;
      follower.time_gap = p.follower_time_gap;
      follower.gap0 = cal.nominal_d0 + p.follower_time_gap * p.ego_speed;
      follower.reaction = cal.follower_reaction;
      out.follower = follower;
      out.route_length = 0.9 * travelled(out.objects.front(), horizon);
      break;
    }
  }
  return out;
}

}  // namespace aebsim
