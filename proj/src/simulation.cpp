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

#include "aebsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "aebsim/error.hpp"
#include "aebsim/rng.hpp"

namespace aebsim
{

void PipelineConfig::validate() const
{
  actuator.validate();
  sensor.validate();
  tracker.validate();
  acc.validate();
  aeb.validate();
  if (!(lane_overlap_threshold > 0.0) || standstill_stop < 0.0) {
    throw ConfigError("pipeline: invalid lane overlap threshold or standstill time");
  }
}

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct TruthView
{
  double gap{kNaN};
  double vrel{kNaN};
  double ttc{kInf};
};

TruthView truth_view(const WorldState & world, double lane_threshold)
{
  TruthView out;
  for (const auto & obj : world.objects) {
    if (!is_forward(world.ego, obj) || std::abs(obj.lane_offset) >= lane_threshold) {
      continue;
    }
    const double g = gap(world.ego, obj);
    if (std::isnan(out.gap) || g < out.gap) {
      out.gap = g;
      out.vrel = world.ego.v - obj.v;
    }
  }
  if (!std::isnan(out.gap)) {
    out.ttc = out.gap <= 0.0 ? 0.0 : ttc(out.gap, out.vrel);
  }
  return out;
}

bool only_parked_ahead(const WorldState & world, double lane_threshold)
{
  for (const auto & obj : world.objects) {
    if (is_forward(world.ego, obj) && std::abs(obj.lane_offset) < lane_threshold &&
        obj.kind != ObjectKind::kParked) {
      return false;
    }
  }
  return true;
}

/// Follower state integrated on the physics grid with a command delay line.
class Follower
{
public:
  Follower(const FollowerSetup & setup, const EgoState & ego, FollowerModel model)
  : setup_(setup), model_(model)
  {
    state_.id = 100;
    state_.length = setup.length;
    state_.v = setup.v0;
    state_.s_rear = ego.s_front - kEgoLength - setup.gap0 - setup.length;
    const auto delay = static_cast<std::size_t>(std::llround(setup.reaction / kPhysicsDt));
    pending_.assign(delay, 0.0);
  }

  double gap_to(const EgoState & ego) const
  {
    return ego.s_front - kEgoLength - (state_.s_rear + state_.length);
  }

  const TrafficObject & state() const { return state_; }

  void step(const EgoState & ego)
  {
    const double g = gap_to(ego);
    const double desired = model_.d0 + setup_.time_gap * state_.v;
    const double cmd = std::clamp(
      model_.k_gap * (g - desired) + model_.k_rel * (ego.v - state_.v), model_.a_min, model_.a_max);
    pending_.push_back(cmd);
    const double a = pending_.front();
    pending_.pop_front();

    const double v_next = std::max(0.0, state_.v + a * kPhysicsDt);
    state_.s_rear += 0.5 * (state_.v + v_next) * kPhysicsDt;
    state_.v = v_next;
    state_.a = a;
    // No interpenetration: a rear contact pins the follower to the ego.
    const double after = gap_to(ego);
    if (after < 0.0) {
      state_.s_rear += after;
      state_.v = std::min(state_.v, ego.v);
    }
  }

private:
  FollowerSetup setup_;
  FollowerModel model_;
  TrafficObject state_;
  std::deque<double> pending_;
};

}  // namespace

RunTrace simulate_run(const RunSetup & setup, const PipelineConfig & pipeline)
{
  pipeline.validate();
  validate(setup.attack);
  setup.safeguards.validate();

  const auto & scripts = setup.scripts;
  Rng sensor_rng(setup.sensor_seed);
  Rng attack_rng(setup.attack_seed);
  ResolvedAttack attack =
    resolve_attack(setup.attack, scripts.hazard_time, scripts.curvature_kappa, attack_rng);

  AccConfig acc = pipeline.acc;
  acc.v_set = scripts.set_speed;
  Tracker tracker(pipeline.tracker);
  ControlStack stack(
    acc, pipeline.aeb, setup.safeguards, pipeline.actuator, pipeline.tracker.drop_after_missed);

  WorldState world;
  world.ego = scripts.ego_init;
  std::optional<Follower> follower;
  if (scripts.follower) {
    follower.emplace(*scripts.follower, world.ego, FollowerModel{});
  }

  RunTrace trace;
  auto & meta = trace.meta;
  meta.family = std::string(to_string(setup.spec.family));
  meta.seed = setup.spec.seed;
  meta.condition = setup.condition;
  meta.frame_dt = kFrameDt;
  meta.ttc_threshold = pipeline.aeb.ttc_threshold;
  meta.route_length = scripts.route_length;
  meta.has_follower = follower.has_value();
  meta.duration = setup.spec.duration;

  const auto frames = static_cast<int>(std::llround(setup.spec.duration / kFrameDt));
  trace.rows.reserve(static_cast<std::size_t>(frames) + 1);
  double standstill_time = 0.0;

  for (int k = 0; k <= frames; ++k) {
    const double t = k * kFrameDt;
    world.t = t;
    world.ego.t = t;
    world.objects.clear();
    for (const auto & script : scripts.objects) {
      world.objects.push_back(script.at(t));
    }
    if (follower) {
      world.follower = follower->state();
    }

    const TruthView truth = truth_view(world, pipeline.lane_overlap_threshold);
    if (k == 0) {
      meta.initial_gap = truth.gap;
    }

    TraceRow row;
    row.t = t;
    row.s_front = world.ego.s_front;
    row.v = world.ego.v;
    row.a_realized = world.ego.a;
    row.truth_gap = truth.gap;
    row.truth_vrel = truth.vrel;
    row.truth_ttc = truth.ttc;
    row.follower_gap = follower ? follower->gap_to(world.ego) : kNaN;
    row.follower_v = follower ? follower->state().v : kNaN;
    arm_attack(attack, t, truth.ttc);
    row.attack_active = attack.kind != AttackKind::kNone &&
                        (attack.kind == AttackKind::kDistanceBias ? bias_factor_at(attack, t) != 1.0
                                                                  : attack.active(t));
    row.phantom_active = attack.kind == AttackKind::kFalsePositive && attack.active(t);

    if (const auto hit = collision_check(world, pipeline.lane_overlap_threshold)) {
      meta.collided = true;
      meta.collision_object = hit->object_id;
      meta.collision_time = hit->t;
      meta.impact_speed = hit->impact_speed;
      row.a_cmd = world.ego.a_cmd_applied;
      row.perceived_gap = kNaN;
      row.perceived_vrel = kNaN;
      trace.rows.push_back(row);
      break;
    }

    const SensorFrame sensed =
      sense(world, pipeline.sensor, k, sensor_rng, scripts.extra_lateral_sigma);
    const SensorFrame attacked =
      apply_attack(sensed, world, attack, pipeline.sensor, t, k, attack_rng);
    tracker.step(attacked.detections, kFrameDt);
    const auto primary = tracker.primary();
    const ControlDecision decision = stack.step(primary, world.ego, kFrameDt);

    row.a_cmd = decision.command.a_cmd;
    row.source = decision.command.source;
    row.eb_active = decision.command.eb_active;
    row.instability = decision.instability;
    row.fallback_active = decision.fallback_active;
    if (primary) {
      row.perceived_gap = primary->gap_est;
      row.perceived_vrel = primary->v_rel_est;
      row.track_id = primary->track_id;
      row.track_age = primary->age_frames;
    } else {
      row.perceived_gap = kNaN;
      row.perceived_vrel = kNaN;
    }
    trace.rows.push_back(row);

    if (k == frames) {
      break;
    }
    if (world.ego.v < 0.01 && only_parked_ahead(world, pipeline.lane_overlap_threshold)) {
      standstill_time += kFrameDt;
      if (standstill_time >= pipeline.standstill_stop - 1e-9) {
        break;
      }
    } else {
      standstill_time = 0.0;
    }

    for (int sub = 0; sub < kSubstepsPerFrame; ++sub) {
      world.ego = step_ego(world.ego, decision.command.a_cmd, pipeline.actuator, kPhysicsDt);
      if (follower) {
        follower->step(world.ego);
      }
    }
  }
  return trace;
}

}  // namespace aebsim
