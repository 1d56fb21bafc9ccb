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

#include "aebsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aebsim/error.hpp"

namespace aebsim
{

std::string_view to_string(ObjectKind kind)
{
  switch (kind) {
    case ObjectKind::kVehicle:
      return "vehicle";
    case ObjectKind::kParked:
      return "parked";
    case ObjectKind::kPhantomTemplate:
      return "phantom";
  }
  return "unknown";
}

void ActuatorModel::validate() const
{
  if (!(tau > 0.0) || !(a_min < 0.0) || !(a_max > 0.0) || !std::isfinite(tau) ||
      !std::isfinite(a_min) || !std::isfinite(a_max)) {
    throw ConfigError("actuator: require tau > 0 and a_min < 0 < a_max");
  }
}

namespace
{

struct LagSolution
{
  double v0;
  double a0;
  double c;
  double tau;

  // 1 - exp(-x/tau), accurate for small x
  double decay(double x) const { return -std::expm1(-x / tau); }
  double accel(double x) const { return c + (a0 - c) * std::exp(-x / tau); }
  double velocity(double x) const { return v0 + c * x + (a0 - c) * tau * decay(x); }
  double displacement(double x) const
  {
    return v0 * x + 0.5 * c * x * x + (a0 - c) * tau * (x - tau * decay(x));
  }
};

}  // namespace

EgoState step_ego(const EgoState & state, double a_cmd, const ActuatorModel & act, double dt)
{
  if (!std::isfinite(a_cmd) || !std::isfinite(dt) || !(dt > 0.0) || !std::isfinite(state.v) ||
      !std::isfinite(state.a) || !std::isfinite(state.s_front)) {
    throw ConfigError("step_ego: non-finite input or dt <= 0");
  }
  const double commanded = std::clamp(a_cmd, act.a_min, act.a_max);
  const LagSolution lag{std::max(state.v, 0.0), state.a, commanded, act.tau};

  EgoState next = state;
  next.t = state.t + dt;
  next.a_cmd_applied = commanded;
  next.a = lag.accel(dt);

  const double v_end = lag.velocity(dt);
  if (v_end >= 0.0) {
    next.v = v_end;
    next.s_front = state.s_front + std::max(0.0, lag.displacement(dt));
    return next;
  }

  // Standstill reached inside the step: locate the first zero crossing.
  double lo = 0.0;
  double hi = dt;
  if (lag.v0 > 0.0) {
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (lag.velocity(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  } else {
    hi = 0.0;
  }
  next.v = 0.0;
  next.s_front = state.s_front + std::max(0.0, lag.displacement(hi));
  return next;
}

std::optional<CollisionRecord> collision_check(
  const WorldState & world, double lane_overlap_threshold)
{
  std::optional<CollisionRecord> hit;
  double deepest = 0.0;
  for (const auto & obj : world.objects) {
    if (!is_forward(world.ego, obj)) {
      continue;
    }
    const double g = gap(world.ego, obj);
    if (g <= 0.0 && std::abs(obj.lane_offset) < lane_overlap_threshold) {
      if (!hit || g < deepest) {
        hit = CollisionRecord{world.t, obj.id, world.ego.v - obj.v};
        deepest = g;
      }
    }
  }
  return hit;
}

ObjectScript::ObjectScript(int id, ObjectKind kind, double length, std::vector<ScriptSample> samples)
: id_(id), kind_(kind), length_(length), samples_(std::move(samples))
{
  if (samples_.empty()) {
    throw ConfigError("object script " + std::to_string(id) + " has no samples");
  }
  if (!(length_ > 0.0)) {
    throw ConfigError("object script " + std::to_string(id) + " has non-positive length");
  }
}

double ObjectScript::duration() const
{
  return static_cast<double>(samples_.size() - 1) * kPhysicsDt;
}

TrafficObject ObjectScript::at(double t) const
{
  const auto last = static_cast<long long>(samples_.size()) - 1;
  const auto idx = std::clamp(std::llround(t / kPhysicsDt), 0LL, last);
  const auto & s = samples_[static_cast<std::size_t>(idx)];
  TrafficObject obj;
  obj.id = id_;
  obj.kind = kind_;
  obj.length = length_;
  obj.s_rear = s.s_rear;
  obj.v = s.v;
  obj.a = s.a;
  obj.lane_offset = s.lane_offset;
  return obj;
}

TrafficObject step_object(
  const TrafficObject & /*obj*/, const ObjectScript & script, double t, double dt)
{
  return script.at(t + dt);
}

double lane_offset_at(const LaneChange & change, double t)
{
  if (t <= change.t_start) {
    return change.offset_start;
  }
  if (change.duration <= 0.0 || t >= change.t_start + change.duration) {
    return 0.0;
  }
  const double u = (t - change.t_start) / change.duration;
  const double smooth = u * u * (3.0 - 2.0 * u);
  return change.offset_start * (1.0 - smooth);
}

std::vector<ScriptSample> integrate_profile(
  double s0, double v0, const std::vector<SpeedPhase> & phases,
  const std::optional<LaneChange> & lane_change, double constant_offset, double horizon,
  double max_jerk)
{
  const auto ticks = static_cast<std::size_t>(std::llround(horizon / kPhysicsDt)) + 1;
  const bool jerk_limited = std::isfinite(max_jerk);
  std::vector<ScriptSample> out;
  out.reserve(ticks);

  double s = s0;
  double v = std::max(0.0, v0);
  double accel = 0.0;
  std::size_t phase_idx = 0;
  const SpeedPhase * active = nullptr;

  for (std::size_t i = 0; i < ticks; ++i) {
    const double t = static_cast<double>(i) * kPhysicsDt;
    while (phase_idx < phases.size() && phases[phase_idx].t_start <= t + 1e-9) {
      active = &phases[phase_idx];
      ++phase_idx;
    }

    double desired = 0.0;
    double target = v;
    if (active != nullptr) {
      target = std::max(0.0, active->v_target);
      const double dv = target - v;
      if (dv != 0.0) {
        double mag = std::abs(active->accel);
        if (jerk_limited) {
          // Largest magnitude that still ramps down to zero within the remaining dv.
          const double dt = kPhysicsDt;
          mag = std::min(mag, max_jerk * (std::sqrt(dt * dt + 2.0 * std::abs(dv) / max_jerk) - dt));
        }
        desired = dv > 0.0 ? mag : -mag;
      }
    }
    if (jerk_limited) {
      const double step = max_jerk * kPhysicsDt;
      accel += std::clamp(desired - accel, -step, step);
    } else {
      accel = desired;
    }
    if (v <= 0.0 && accel < 0.0) {
      accel = 0.0;
    }

    ScriptSample sample;
    sample.s_rear = s;
    sample.v = v;
    sample.a = accel;
    sample.lane_offset =
      lane_change ? lane_offset_at(*lane_change, t) : constant_offset;
    out.push_back(sample);

    if (accel == 0.0) {
      s += v * kPhysicsDt;
      continue;
    }
    const double v_next = v + accel * kPhysicsDt;
    const bool overshoot = (accel > 0.0 && v < target && v_next > target) ||
                           (accel < 0.0 && v > target && v_next < target) || v_next < 0.0;
    if (overshoot) {
      const double stop = accel < 0.0 && v <= target ? 0.0 : target;
      const double reach = (stop - v) / accel;
      s += v * reach + 0.5 * accel * reach * reach + stop * (kPhysicsDt - reach);
      v = stop;
      accel = 0.0;
    } else {
      s += v * kPhysicsDt + 0.5 * accel * kPhysicsDt * kPhysicsDt;
      v = v_next;
    }
  }
  return out;
}

}  // namespace aebsim
