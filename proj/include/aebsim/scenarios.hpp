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

#ifndef AEBSIM__SCENARIOS_HPP_
#define AEBSIM__SCENARIOS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aebsim/dynamics.hpp"
#include "aebsim/perception.hpp"

namespace aebsim
{

enum class ScenarioFamily {
  kHighwayFollowing,
  kStopAndGo,
  kCutIn,
  kParkedVehicle,
  kCurvedRoad,
  kMultiVehicle,
};

inline constexpr std::array<ScenarioFamily, 6> kAllFamilies{
  ScenarioFamily::kHighwayFollowing, ScenarioFamily::kStopAndGo, ScenarioFamily::kCutIn,
  ScenarioFamily::kParkedVehicle,    ScenarioFamily::kCurvedRoad, ScenarioFamily::kMultiVehicle,
};

std::string_view to_string(ScenarioFamily family);
/// Throws ConfigError on an unknown name.
ScenarioFamily parse_family(std::string_view name);
int family_ordinal(ScenarioFamily family);

/// Parameter ranges the generators draw from. Shipped defaults live in
/// configs/calibration.json and mirror these values.
struct ScenarioCalibration
{
  double duration{40.0};
  double lane_width{3.5};
  /// Spacing law used to place leads near ACC equilibrium at t = 0.
  double nominal_time_gap{1.8};
  double nominal_d0{2.0};

  // highway following (and curved road)
  Range highway_ego_speed{25.0, 33.0};
  Range highway_gap_scale{0.97, 1.06};  ///< initial gap relative to the ACC spacing target
  Range highway_gap_clip{40.0, 70.0};
  Range set_speed_margin{1.0, 4.0};
  double hazard_prob{0.22};
  Range hazard_time{8.0, 20.0};
  Range hazard_decel{6.0, 6.0};
  Range hazard_speed_fraction{0.0, 0.2};
  Range hazard_hold{2.0, 4.0};
  Range slowdown_decel{0.5, 1.0};
  Range slowdown_drop{1.0, 3.0};
  Range slowdown_hold{4.0, 8.0};
  double recover_accel{0.8};
  /// Jerk bound on scripted traffic speed programs [m/s^3].
  double traffic_jerk{2.0};

  // stop and go
  Range stopgo_top_speed{12.0, 15.0};
  Range stopgo_accel{0.8, 1.5};
  Range stopgo_decel{1.2, 2.5};
  Range stopgo_stop_hold{2.0, 5.0};
  Range stopgo_cruise_hold{3.0, 8.0};

  // cut-in
  Range cutin_ego_speed{22.0, 30.0};
  /// Gap at merge start [m].
  Range cutin_gap{8.0, 20.0};
  /// The merging car is faster by enough to restore nominal spacing in this time.
  Range cutin_restore_time{2.6, 4.0};
  Range cutin_time{6.0, 14.0};
  Range cutin_duration{1.2, 1.8};
  Range cutin_aggressiveness{0.3, 1.0};
  double cutin_max_brake{2.5};
  /// Speed shed after the merge at full aggressiveness, as a fraction.
  double cutin_max_slowdown{0.5};
  /// Decel used by the merging car to settle onto the ego speed.
  double cutin_settle_decel{0.8};
  Range cutin_brake_delay{0.5, 2.0};

  // parked vehicle
  Range parked_ego_speed{10.0, 14.0};
  Range parked_gap{130.0, 200.0};
  Range parked_lane_offset{0.6, 1.2};

  // curved road
  double curvature_kappa{1.5};
  double curved_lateral_sigma{0.15};

  // multi-vehicle
  Range multi_second_lead_spacing{25.0, 40.0};
  Range multi_adjacent_gap{-5.0, 30.0};
  Range multi_adjacent_speed_delta{-2.0, 2.0};
  Range follower_time_gap{1.2, 1.5};
  double follower_reaction{1.2};

  void validate() const;
};

/// Family-specific draws; unused fields stay at their defaults and are not echoed.
struct ScenarioParams
{
  double ego_speed{0.0};
  double set_speed{0.0};
  double lead_gap{0.0};
  double lead_speed{0.0};
  bool hazard{false};
  double event_time{0.0};
  double event_decel{0.0};
  double event_target_speed{0.0};
  double event_hold{0.0};
  // stop and go
  double top_speed{0.0};
  double go_accel{0.0};
  std::vector<double> stop_holds;
  std::vector<double> cruise_holds;
  // cut-in
  double cutin_gap{0.0};
  double cutin_speed{0.0};
  double cutin_time{0.0};
  double cutin_duration{0.0};
  double cutin_aggressiveness{0.0};
  double cutin_brake_delay{0.0};
  // parked
  double parked_lane_offset{0.0};
  // multi-vehicle
  double second_lead_spacing{0.0};
  double adjacent_gap{0.0};
  double adjacent_speed{0.0};
  double follower_time_gap{0.0};
};

struct ScenarioSpec
{
  ScenarioFamily family{ScenarioFamily::kHighwayFollowing};
  std::uint64_t seed{0};
  double duration{40.0};
  ScenarioParams params;
};

/// Ordered (name, value) view of the parameters relevant to the family.
std::vector<std::pair<std::string, double>> echo_params(const ScenarioSpec & spec);

struct FollowerSetup
{
  double gap0{0.0};  ///< ego rear bumper to follower front bumper [m]
  double v0{0.0};
  double time_gap{1.4};
  double reaction{0.6};
  double length{4.5};
};

/// Everything a run needs from the scenario.
struct ScenarioScripts
{
  EgoState ego_init;
  double set_speed{0.0};
  std::vector<ObjectScript> objects;
  std::optional<FollowerSetup> follower;
  double hazard_time{0.0};
  bool curved{false};
  double curvature_kappa{1.0};
  double extra_lateral_sigma{0.0};
  /// Distance whose traversal time is reported as travel time [m].
  double route_length{0.0};
};

/// Deterministic in (family, seed, calibration).
ScenarioSpec sample(ScenarioFamily family, std::uint64_t seed, const ScenarioCalibration & cal = {});

/// Traffic scripts and ego initial conditions for a sampled spec.
ScenarioScripts build_scripts(const ScenarioSpec & spec, const ScenarioCalibration & cal = {});

}  // namespace aebsim

#endif  // AEBSIM__SCENARIOS_HPP_
