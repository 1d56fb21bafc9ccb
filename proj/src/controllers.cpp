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

#include "aebsim/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aebsim/error.hpp"

namespace aebsim
{

std::string_view to_string(CommandSource source)
{
  switch (source) {
    case CommandSource::kIdle:
      return "IDLE";
    case CommandSource::kAcc:
      return "ACC";
    case CommandSource::kAeb:
      return "AEB";
    case CommandSource::kFallback:
      return "FALLBACK";
  }
  return "IDLE";
}

std::optional<CommandSource> parse_command_source(std::string_view name)
{
  for (auto s : {CommandSource::kIdle, CommandSource::kAcc, CommandSource::kAeb,
                 CommandSource::kFallback}) {
    if (to_string(s) == name) {
      return s;
    }
  }
  return std::nullopt;
}

void AebConfig::validate() const
{
  if (!(ttc_threshold > 0.0) || !(a_hard <= a_eb_floor) || !(a_eb_floor < 0.0) ||
      d_margin < 0.0 || !(release_factor >= 1.0) || min_hold < 0.0 || min_speed < 0.0) {
    throw ConfigError("aeb: require ttc_threshold > 0, a_hard <= a_eb_floor < 0");
  }
}

void AccConfig::validate() const
{
  if (!(time_gap > 0.0) || !(k_gap > 0.0) || !(k_rel > 0.0) || !(k_speed > 0.0) ||
      !(a_lo < 0.0) || !(a_hi > 0.0) || d0 < 0.0 || v_set < 0.0 ||
      standstill_release < 0.0) {
    throw ConfigError("acc: require time_gap > 0, positive gains and a_lo < 0 < a_hi");
  }
}

void SafeguardConfig::validate() const
{
  if (persistence_frames < 1 || !(jerk_limit_apply > 0.0) || !(jerk_limit_release > 0.0) ||
      instability_window < 1 || !(instability_threshold > 0.0) || !(instability_threshold < 1.0) ||
      !(fallback_decel_cap < 0.0) || fallback_speed_cap_factor < 0.0 ||
      fallback_speed_cap_factor > 1.0) {
    throw ConfigError("safeguards: invalid configuration");
  }
}

double ttc(double gap, double v_closing)
{
  if (v_closing > kTtcEpsilon) {
    return std::max(0.0, gap) / v_closing;
  }
  return std::numeric_limits<double>::infinity();
}

double aeb_deceleration(double gap_est, double v_rel_est, const AebConfig & cfg)
{
  const double a_req = v_rel_est * v_rel_est / (2.0 * std::max(gap_est - cfg.d_margin, 0.1));
  return -std::clamp(a_req, std::abs(cfg.a_eb_floor), std::abs(cfg.a_hard));
}

std::optional<ControlCommand> aeb_step(
  const std::optional<Track> & primary, const EgoState & ego, const AebConfig & cfg)
{
  if (!primary || ego.v < cfg.min_speed || !(ttc(primary->gap_est, primary->v_rel_est) < cfg.ttc_threshold)) {
    return std::nullopt;
  }
  return ControlCommand{
    aeb_deceleration(primary->gap_est, primary->v_rel_est, cfg), CommandSource::kAeb, true};
}

ControlCommand acc_step(
  const std::optional<Track> & primary, const EgoState & ego, const AccConfig & cfg)
{
  const double cruise = std::clamp(cfg.k_speed * (cfg.v_set - ego.v), cfg.a_lo, cfg.a_hi);
  if (!primary) {
    return {cruise, CommandSource::kAcc, false};
  }
  const double desired = cfg.d0 + cfg.time_gap * ego.v;
  const double follow = std::clamp(
    cfg.k_gap * (primary->gap_est - desired) - cfg.k_rel * primary->v_rel_est, cfg.a_lo, cfg.a_hi);
  double a = std::min(follow, cruise);
  if (ego.v < 0.1 && primary->gap_est < cfg.d0 + cfg.standstill_release) {
    a = std::min(a, 0.0);
  }
  return {a, CommandSource::kAcc, false};
}

ControlCommand arbitrate(const ControlCommand & acc_cmd, const std::optional<ControlCommand> & aeb_cmd)
{
  if (!aeb_cmd) {
    return acc_cmd;
  }
  return {std::min(acc_cmd.a_cmd, aeb_cmd->a_cmd), CommandSource::kAeb, true};
}

std::optional<ControlCommand> guard_persistence(
  const std::optional<ControlCommand> & aeb_cmd, const std::optional<Track> & primary,
  const SafeguardConfig & cfg)
{
  if (!aeb_cmd) {
    return aeb_cmd;
  }
  if (primary && primary->age_frames >= cfg.persistence_frames) {
    return aeb_cmd;
  }
  return std::nullopt;
}

double guard_rate_limit(double prev_a, double new_a, double dt, const SafeguardConfig & cfg)
{
  const double max_apply = cfg.jerk_limit_apply * dt;
  const double max_release = cfg.jerk_limit_release * dt;
  return prev_a + std::clamp(new_a - prev_a, -max_apply, max_release);
}

double instability_metric(const std::deque<bool> & bad_frames, int window)
{
  if (window < 1) {
    throw ConfigError("instability window must be >= 1");
  }
  const auto n = std::min<std::size_t>(bad_frames.size(), static_cast<std::size_t>(window));
  const auto bad = std::count(bad_frames.end() - static_cast<std::ptrdiff_t>(n), bad_frames.end(), true);
  return static_cast<double>(bad) / static_cast<double>(window);
}

ControlCommand guard_fallback(
  const ControlCommand & cmd, double instability, const EgoState & /*ego*/,
  const SafeguardConfig & cfg)
{
  if (!(instability > cfg.instability_threshold)) {
    return cmd;
  }
  const double cap = cfg.fallback_decel_cap * instability;
  if (cmd.a_cmd <= cap) {
    return cmd;
  }
  ControlCommand out = cmd;
  out.a_cmd = cap;
  if (!cmd.eb_active) {
    out.source = CommandSource::kFallback;
  }
  return out;
}

AebLatch::AebLatch(AebConfig cfg, int drop_horizon_frames)
: cfg_(cfg), drop_horizon_(drop_horizon_frames)
{
  cfg_.validate();
}

std::optional<ControlCommand> AebLatch::step(
  const std::optional<Track> & primary, const EgoState & ego, double frame_dt, int min_age)
{
  const bool eligible = primary && primary->age_frames >= min_age;
  if (auto fresh = eligible ? aeb_step(primary, ego, cfg_) : std::nullopt) {
    if (!active_) {
      elapsed_ = 0.0;
    } else {
      elapsed_ += frame_dt;
    }
    active_ = true;
    missing_ = 0;
    held_ = fresh->a_cmd;
    return fresh;
  }
  if (!active_) {
    return std::nullopt;
  }
  if (ego.v < cfg_.min_speed) {
    active_ = false;
    missing_ = 0;
    return std::nullopt;
  }

  elapsed_ += frame_dt;
  const bool holding = elapsed_ < cfg_.min_hold - 1e-9;
  if (primary) {
    missing_ = 0;
    const double time_to_collision = ttc(primary->gap_est, primary->v_rel_est);
    if (time_to_collision <= cfg_.release_factor * cfg_.ttc_threshold) {
      held_ = aeb_deceleration(primary->gap_est, primary->v_rel_est, cfg_);
      return ControlCommand{held_, CommandSource::kAeb, true};
    }
  } else {
    ++missing_;
    if (missing_ <= drop_horizon_) {
      return ControlCommand{held_, CommandSource::kAeb, true};
    }
  }
  if (holding) {
    return ControlCommand{held_, CommandSource::kAeb, true};
  }
  active_ = false;
  missing_ = 0;
  return std::nullopt;
}

StabilityMonitor::StabilityMonitor(int window) : window_(window)
{
  if (window_ < 1) {
    throw ConfigError("instability window must be >= 1");
  }
}

double StabilityMonitor::update(const std::optional<Track> & primary)
{
  bool bad = false;
  if (primary) {
    bad = primary->missed_frames > 0 || (last_id_ && *last_id_ != primary->track_id);
    last_id_ = primary->track_id;
    lost_frames_ = 0;
  } else if (last_id_) {
    bad = true;
    if (++lost_frames_ >= window_) {
      last_id_.reset();
      lost_frames_ = 0;
    }
  }
  history_.push_back(bad);
  while (history_.size() > static_cast<std::size_t>(window_)) {
    history_.pop_front();
  }
  return instability();
}

double StabilityMonitor::instability() const
{
  return instability_metric(history_, window_);
}

ControlStack::ControlStack(
  AccConfig acc, AebConfig aeb, SafeguardConfig safeguards, ActuatorModel actuator,
  int drop_horizon_frames)
: acc_(acc),
  aeb_(aeb),
  sg_(safeguards),
  actuator_(actuator),
  latch_(aeb, drop_horizon_frames),
  monitor_(safeguards.instability_window)
{
  acc_.validate();
  sg_.validate();
  actuator_.validate();
}

ControlDecision ControlStack::step(
  const std::optional<Track> & primary, const EgoState & ego, double frame_dt)
{
  ControlDecision out;
  out.instability = monitor_.update(primary);
  const bool unstable = out.instability > sg_.instability_threshold;
  out.fallback_active = unstable && (sg_.fallback_decel || sg_.fallback_speed_cap);

  AccConfig acc = acc_;
  if (unstable && sg_.fallback_speed_cap) {
    acc.v_set *= sg_.fallback_speed_cap_factor;
  }
  ControlCommand acc_cmd = acc_step(primary, ego, acc);
  if (unstable && sg_.fallback_speed_cap && acc_cmd.a_cmd < acc_step(primary, ego, acc_).a_cmd) {
    acc_cmd.source = CommandSource::kFallback;
  }

  auto aeb_cmd = latch_.step(primary, ego, frame_dt, sg_.persistence ? sg_.persistence_frames : 0);
  if (sg_.persistence) {
    aeb_cmd = guard_persistence(aeb_cmd, primary, sg_);
  }
  ControlCommand cmd = arbitrate(acc_cmd, aeb_cmd);
  if (sg_.fallback_decel) {
    cmd = guard_fallback(cmd, out.instability, ego, sg_);
  }
  if (sg_.rate_limit) {
    cmd.a_cmd = guard_rate_limit(prev_a_, cmd.a_cmd, frame_dt, sg_);
  }
  cmd.a_cmd = std::clamp(cmd.a_cmd, actuator_.a_min, actuator_.a_max);
  prev_a_ = cmd.a_cmd;
  out.command = cmd;
  return out;
}

}  // namespace aebsim
