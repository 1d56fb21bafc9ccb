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

#ifndef AEBSIM__CONTROLLERS_HPP_
#define AEBSIM__CONTROLLERS_HPP_

#include <cstddef>
#include <deque>
#include <optional>
#include <string_view>

#include "aebsim/dynamics.hpp"
#include "aebsim/tracker.hpp"

namespace aebsim
{

enum class CommandSource { kIdle, kAcc, kAeb, kFallback };

std::string_view to_string(CommandSource source);
std::optional<CommandSource> parse_command_source(std::string_view name);

struct ControlCommand
{
  double a_cmd{0.0};
  CommandSource source{CommandSource::kIdle};
  bool eb_active{false};
};

struct AebConfig
{
  double ttc_threshold{1.2};
  double a_hard{-9.0};
  double a_eb_floor{-4.0};
  double d_margin{2.0};
  /// Latched braking releases once TTC exceeds release_factor * ttc_threshold.
  double release_factor{1.5};
  /// Minimum latch duration [s]; an emergency stop is not revoked within it.
  double min_hold{0.5};
  /// Below this ego speed the AEB neither triggers nor holds.
  double min_speed{1.0};

  void validate() const;
};

struct AccConfig
{
  double time_gap{1.8};
  double d0{2.0};
  double k_gap{0.23};
  double k_rel{0.74};
  double k_speed{0.4};
  double v_set{30.0};
  double a_lo{-3.5};
  double a_hi{2.0};
  /// At standstill the ACC holds the brake until the gap exceeds d0 + this.
  double standstill_release{1.0};

  void validate() const;
};

struct SafeguardConfig
{
  bool persistence{false};
  bool rate_limit{false};
  bool fallback_decel{false};
  bool fallback_speed_cap{false};

  int persistence_frames{3};
  double jerk_limit_apply{15.0};
  double jerk_limit_release{5.0};
  int instability_window{20};
  double instability_threshold{0.3};
  double fallback_decel_cap{-2.0};
  double fallback_speed_cap_factor{0.8};

  bool any() const { return persistence || rate_limit || fallback_decel || fallback_speed_cap; }
  void validate() const;
};

/// Closing-speed threshold below which TTC is infinite [m/s].
inline constexpr double kTtcEpsilon = 0.01;

/// Time to collision; +inf when not closing.
double ttc(double gap, double v_closing);

/// Unlatched AEB decision: a command iff TTC is strictly below the threshold.
std::optional<ControlCommand> aeb_step(
  const std::optional<Track> & primary, const EgoState & ego, const AebConfig & cfg);

/// Required-deceleration braking law bounded to [a_hard, a_eb_floor].
double aeb_deceleration(double gap_est, double v_rel_est, const AebConfig & cfg);

/// Constant-time-gap spacing law, capped by set-speed pursuit.
ControlCommand acc_step(
  const std::optional<Track> & primary, const EgoState & ego, const AccConfig & cfg);

/// Most negative command wins; an AEB command always marks the result as AEB.
ControlCommand arbitrate(const ControlCommand & acc_cmd, const std::optional<ControlCommand> & aeb_cmd);

std::optional<ControlCommand> guard_persistence(
  const std::optional<ControlCommand> & aeb_cmd, const std::optional<Track> & primary,
  const SafeguardConfig & cfg);

double guard_rate_limit(double prev_a, double new_a, double dt, const SafeguardConfig & cfg);

/// Fraction of the last `window` frames flagged bad. Missing history counts as good.
double instability_metric(const std::deque<bool> & bad_frames, int window);

ControlCommand guard_fallback(
  const ControlCommand & cmd, double instability, const EgoState & ego, const SafeguardConfig & cfg);

/// AEB with hysteresis: holds until TTC exceeds the release band or the
/// primary has been absent longer than the tracker's drop horizon.
class AebLatch
{
public:
  AebLatch(AebConfig cfg, int drop_horizon_frames);

  /// A trigger only arms the latch when the primary track is at least min_age frames old.
  std::optional<ControlCommand> step(
    const std::optional<Track> & primary, const EgoState & ego, double frame_dt, int min_age = 0);

  bool active() const { return active_; }

private:
  AebConfig cfg_;
  int drop_horizon_;
  bool active_{false};
  double held_{0.0};
  double elapsed_{0.0};
  int missing_{0};
};

/// Flags frames where the primary object is coasting, lost, or changed identity.
class StabilityMonitor
{
public:
  explicit StabilityMonitor(int window);

  double update(const std::optional<Track> & primary);
  double instability() const;
  bool last_bad() const { return !history_.empty() && history_.back(); }

private:
  int window_;
  std::deque<bool> history_;
  std::optional<int> last_id_;
  int lost_frames_{0};
  bool lost_{false};
};

struct ControlDecision
{
  ControlCommand command;
  double instability{0.0};
  bool fallback_active{false};
};

/// Full control stage for one run: ACC, latched AEB, arbitration and the
/// enabled safeguards, then actuator clamping.
class ControlStack
{
public:
  ControlStack(
    AccConfig acc, AebConfig aeb, SafeguardConfig safeguards, ActuatorModel actuator,
    int drop_horizon_frames);

  ControlDecision step(const std::optional<Track> & primary, const EgoState & ego, double frame_dt);

private:
  AccConfig acc_;
  AebConfig aeb_;
  SafeguardConfig sg_;
  ActuatorModel actuator_;
  AebLatch latch_;
  StabilityMonitor monitor_;
  double prev_a_{0.0};
};

}  // namespace aebsim

#endif  // AEBSIM__CONTROLLERS_HPP_
