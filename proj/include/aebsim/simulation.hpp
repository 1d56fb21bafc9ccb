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

#ifndef AEBSIM__SIMULATION_HPP_
#define AEBSIM__SIMULATION_HPP_

#include <cstdint>
#include <string>

#include "aebsim/controllers.hpp"
#include "aebsim/perception.hpp"
#include "aebsim/scenarios.hpp"
#include "aebsim/trace.hpp"
#include "aebsim/tracker.hpp"

namespace aebsim
{

/// Static configuration shared by every run of an experiment.
struct PipelineConfig
{
  ActuatorModel actuator;
  SensorConfig sensor;
  TrackerConfig tracker;
  AccConfig acc;
  AebConfig aeb;
  double lane_overlap_threshold{1.5};
  /// Standstill this long with only parked objects ahead ends the run [s].
  double standstill_stop{2.0};

  void validate() const;
};

/// Reaction-delayed car-following rule for the vehicle behind the ego.
struct FollowerModel
{
  double k_gap{0.25};
  double k_rel{0.8};
  double d0{2.0};
  double a_min{-7.0};
  double a_max{2.0};
};

struct RunSetup
{
  ScenarioSpec spec;
  ScenarioScripts scripts;
  AttackSpec attack;
  SafeguardConfig safeguards;
  std::string condition;
  /// Seeds for the benign sensor noise and the attack draws.
  std::uint64_t sensor_seed{0};
  std::uint64_t attack_seed{0};
};

/// Closed-loop simulation of one run. Single-threaded; touches no shared state.
RunTrace simulate_run(const RunSetup & setup, const PipelineConfig & pipeline);

}  // namespace aebsim

#endif  // AEBSIM__SIMULATION_HPP_
