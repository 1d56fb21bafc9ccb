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

#ifndef AEBSIM__DYNAMICS_HPP_
#define AEBSIM__DYNAMICS_HPP_

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace aebsim
{

/// Physics integration step [s].
inline constexpr double kPhysicsDt = 0.01;
/// Perception / control frame period [s].
inline constexpr double kFrameDt = 0.1;
inline constexpr int kSubstepsPerFrame = 10;
/// Ego body length [m]; ego lane offset is fixed at 0.
inline constexpr double kEgoLength = 4.5;

struct EgoState
{
  double t{0.0};
  double s_front{0.0};   ///< front bumper position [m]
  double v{0.0};         ///< speed [m/s], never negative
  double a{0.0};         ///< realized acceleration [m/s^2]
  double a_cmd_applied{0.0};
};

enum class ObjectKind { kVehicle, kParked, kPhantomTemplate };

std::string_view to_string(ObjectKind kind);

struct TrafficObject
{
  int id{0};
  double s_rear{0.0};       ///< rear bumper position [m]
  double v{0.0};
  double a{0.0};
  double lane_offset{0.0};  ///< lateral offset from ego lane center [m]
  double length{4.5};
  ObjectKind kind{ObjectKind::kVehicle};
};

/// First-order lag from commanded to realized acceleration.
struct ActuatorModel
{
  double tau{0.2};
  double a_min{-9.0};
  double a_max{2.5};

  void validate() const;
};

struct WorldState
{
  double t{0.0};
  EgoState ego;
  std::vector<TrafficObject> objects;           ///< scripted traffic
  std::optional<TrafficObject> follower;        ///< closed-loop follower behind ego, if any
};

struct CollisionRecord
{
  double t{0.0};
  int object_id{0};
  double impact_speed{0.0};  ///< ego.v - obj.v at impact [m/s]
};

/// Advance the ego by dt under a held command using the exact solution of the
/// lagged double integrator. Throws ConfigError on non-finite input.
EgoState step_ego(const EgoState & state, double a_cmd, const ActuatorModel & act, double dt);

/// Bumper-to-bumper distance; negative when overlapping.
inline double gap(const EgoState & ego, const TrafficObject & obj)
{
  return obj.s_rear - ego.s_front;
}

/// True when the object's rear bumper lies ahead of the ego's rear bumper.
inline bool is_forward(const EgoState & ego, const TrafficObject & obj)
{
  return obj.s_rear > ego.s_front - kEgoLength;
}

std::optional<CollisionRecord> collision_check(
  const WorldState & world, double lane_overlap_threshold);

/// One scripted sample of a traffic participant.
struct ScriptSample
{
  double s_rear{0.0};
  double v{0.0};
  double a{0.0};
  double lane_offset{0.0};
};

/// Open-loop trajectory of one traffic object sampled on the physics grid.
/// A pure function of time: state(t) never depends on ego behavior.
class ObjectScript
{
public:
  ObjectScript(int id, ObjectKind kind, double length, std::vector<ScriptSample> samples);

  int id() const { return id_; }
  ObjectKind kind() const { return kind_; }
  double length() const { return length_; }
  double duration() const;

  /// State at time t (clamped to the scripted horizon, nearest physics tick).
  TrafficObject at(double t) const;

private:
  int id_;
  ObjectKind kind_;
  double length_;
  std::vector<ScriptSample> samples_;
};

/// Script evaluated one step ahead.
TrafficObject step_object(const TrafficObject & obj, const ObjectScript & script, double t, double dt);

/// Piecewise speed program: from t_start the object accelerates with |accel|
/// toward v_target and holds it once reached.
struct SpeedPhase
{
  double t_start{0.0};
  double accel{0.0};
  double v_target{0.0};
};

/// Lane change toward offset 0 with a monotone smoothstep profile.
struct LaneChange
{
  double offset_start{0.0};
  double t_start{0.0};
  double duration{1.5};
};

double lane_offset_at(const LaneChange & change, double t);

/// Integrate a speed program on the physics grid. Phases must be sorted by t_start.
/// A finite max_jerk makes acceleration changes gradual, including the approach to each target.
std::vector<ScriptSample> integrate_profile(
  double s0, double v0, const std::vector<SpeedPhase> & phases,
  const std::optional<LaneChange> & lane_change, double constant_offset, double horizon,
  double max_jerk = std::numeric_limits<double>::infinity());

}  // namespace aebsim

#endif  // AEBSIM__DYNAMICS_HPP_
