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

#ifndef AEBSIM__PERCEPTION_HPP_
#define AEBSIM__PERCEPTION_HPP_

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "aebsim/dynamics.hpp"
#include "aebsim/rng.hpp"

namespace aebsim
{

/// Object-level detection as seen by the tracker. Carries no ground-truth id.
struct Detection
{
  double perceived_gap{0.0};
  double perceived_lane_offset{0.0};
  double bbox_length{4.5};
  double confidence{0.9};
  int frame_index{0};
};

struct SensorConfig
{
  double range_max{120.0};
  double range_noise_sigma{0.02};
  double base_drop_prob{0.002};
  double frame_rate{10.0};
  double lateral_noise_sigma{0.05};
  double length_noise_sigma{0.05};
  /// In-lane test used to pick the attacked lead object.
  double lane_threshold{1.5};

  void validate() const;
};

/// Output of the sensor stage. `truth_ids` is channel-internal bookkeeping
/// (which ground-truth object produced each detection, -1 for synthetic);
/// only `detections` is handed to the tracker.
struct SensorFrame
{
  std::vector<Detection> detections;
  std::vector<int> truth_ids;
};

/// Closed interval a parameter is drawn from per run; lo == hi is a constant.
struct Range
{
  double lo{0.0};
  double hi{0.0};

  static Range constant(double x) { return {x, x}; }
  double draw(Rng & rng) const { return hi > lo ? rng.uniform(lo, hi) : lo; }
};

/// When an attack window starts: absolute time, relative to the scenario's
/// hazard event (negative offsets start before it), or relative to the first
/// frame at which the ground-truth TTC to the lead drops below trigger_ttc.
enum class Anchor { kAbsolute, kHazard, kTruthTtc };

struct AttackWindow
{
  Anchor anchor{Anchor::kAbsolute};
  Range start{Range::constant(0.0)};
  Range duration{Range::constant(0.0)};
  Range trigger_ttc{Range::constant(0.0)};  ///< used by Anchor::kTruthTtc only [s]
};

struct FalseNegativeAttack
{
  AttackWindow window;
};

struct FalsePositiveAttack
{
  AttackWindow window;
  Range phantom_gap{Range::constant(15.0)};
  /// Closing speed of the phantom toward the ego [m/s]; positive approaches.
  Range phantom_rel_speed{Range::constant(0.0)};
  double phantom_length{4.5};
  double phantom_confidence{0.9};
};

struct DistanceBiasAttack
{
  double factor{1.0};
  /// Duration <= 0 or absent means "until the end of the run".
  std::optional<AttackWindow> window;
  /// Time over which the factor moves from 1 to its target once the window opens.
  Range ramp{Range::constant(0.0)};
};

enum class FlickerPattern { kAlternateFrames, kDropProbability };

struct FlickerAttack
{
  AttackWindow window;
  FlickerPattern pattern{FlickerPattern::kAlternateFrames};
  double drop_prob{0.5};
};

using AttackSpec = std::variant<
  std::monostate, FalseNegativeAttack, FalsePositiveAttack, DistanceBiasAttack, FlickerAttack>;

std::string_view attack_name(const AttackSpec & spec);

/// Check field invariants; throws ConfigError.
void validate(const AttackSpec & spec);

enum class AttackKind { kNone, kFalseNegative, kFalsePositive, kDistanceBias, kFlicker };

/// Per-run concrete attack after drawing every ranged parameter.
struct ResolvedAttack
{
  AttackKind kind{AttackKind::kNone};
  double start{0.0};
  double end{0.0};  ///< exclusive; +inf for open-ended
  double phantom_gap{0.0};
  double phantom_rel_speed{0.0};
  double phantom_length{4.5};
  double phantom_confidence{0.9};
  double factor{1.0};  ///< effective factor, curvature amplification applied
  double ramp{0.0};
  FlickerPattern pattern{FlickerPattern::kAlternateFrames};
  double drop_prob{0.0};
  /// Pending TTC-anchored window: opens once truth TTC < trigger_ttc.
  bool armed{false};
  double trigger_ttc{0.0};
  double pending_offset{0.0};
  double pending_duration{0.0};

  bool active(double t) const { return t >= start - 1e-9 && t < end - 1e-9; }
};

/// Opens a pending TTC-anchored window once the truth TTC falls below its trigger.
void arm_attack(ResolvedAttack & attack, double t, double truth_ttc);

/// Bias amplification for the scenario: 1 except on curved roads.
double curvature_bias_multiplier(bool curved_road, double kappa);

/// Effective factor 1 + kappa * (factor - 1).
double effective_bias_factor(double factor, double kappa);

ResolvedAttack resolve_attack(
  const AttackSpec & spec, double hazard_time, double curvature_kappa, Rng & rng);

/// Index of the nearest in-lane forward ground-truth object, if any.
std::optional<int> lead_object_id(const WorldState & world, double lane_threshold);

/// Ground truth to object-level detections with benign noise and dropouts.
/// Draws a fixed number of variates per object so the noise sequence does not
/// depend on which objects happen to be detected.
SensorFrame sense(
  const WorldState & world, const SensorConfig & cfg, int frame_index, Rng & rng,
  double extra_lateral_sigma = 0.0);

/// Inject the attack effect at the perception output level.
SensorFrame apply_attack(
  const SensorFrame & frame, const WorldState & world, const ResolvedAttack & attack,
  const SensorConfig & cfg, double t, int frame_index, Rng & rng);

/// Bias factor in force at time t (1 outside the window, ramped inside).
double bias_factor_at(const ResolvedAttack & attack, double t);

/// Phantom gap at time t for an active false-positive attack.
double phantom_gap_at(const ResolvedAttack & attack, double t);

}  // namespace aebsim

#endif  // AEBSIM__PERCEPTION_HPP_
