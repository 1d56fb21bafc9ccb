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

#include "aebsim/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "aebsim/error.hpp"

namespace aebsim
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_range(const Range & r, const char * what, double min_allowed)
{
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    throw ConfigError(std::string("attack: invalid range for ") + what);
  }
  if (r.lo < min_allowed) {
    throw ConfigError(std::string("attack: ") + what + " below allowed minimum");
  }
}

void check_window(const AttackWindow & w)
{
  check_range(w.start, "start", -kInf);
  check_range(w.duration, "duration", 0.0);
  if (w.anchor == Anchor::kTruthTtc) {
    check_range(w.trigger_ttc, "trigger_ttc", 0.0);
    if (!(w.trigger_ttc.lo > 0.0)) {
      throw ConfigError("attack: ttc-anchored window needs a positive trigger_ttc");
    }
  }
}

struct DrawnWindow
{
  double start;
  double end;
  double trigger_ttc{0.0};
  double offset{0.0};
  double duration{0.0};
};

DrawnWindow draw_window(const AttackWindow & w, double hazard_time, Rng & rng, bool open_ended)
{
  const double base = w.anchor == Anchor::kHazard ? hazard_time : 0.0;
  const double offset = w.start.draw(rng);
  const double duration = open_ended && w.duration.hi <= 0.0 ? kInf : w.duration.draw(rng);
  if (w.anchor == Anchor::kTruthTtc) {
    return {kInf, kInf, w.trigger_ttc.draw(rng), offset, duration};
  }
  const double start = base + offset;
  return {start, start + duration};
}

void place_window(ResolvedAttack & out, const DrawnWindow & w)
{
  out.start = w.start;
  out.end = w.end;
  out.armed = w.trigger_ttc > 0.0;
  out.trigger_ttc = w.trigger_ttc;
  out.pending_offset = w.offset;
  out.pending_duration = w.duration;
}

int first_frame_at_or_after(double t)
{
  return static_cast<int>(std::ceil(t / kFrameDt - 1e-6));
}

}  // namespace

void SensorConfig::validate() const
{
  if (!(range_max > 0.0) || range_noise_sigma < 0.0 || base_drop_prob < 0.0 ||
      !(base_drop_prob < 1.0) || !(frame_rate > 0.0) || lateral_noise_sigma < 0.0 ||
      length_noise_sigma < 0.0 || !(lane_threshold > 0.0)) {
    throw ConfigError("sensor: invalid configuration");
  }
}

std::string_view attack_name(const AttackSpec & spec)
{
  return std::visit(
    [](const auto & a) -> std::string_view {
      using T = std::decay_t<decltype(a)>;
      if constexpr (std::is_same_v<T, FalseNegativeAttack>) {
        return "false_negative";
      } else if constexpr (std::is_same_v<T, FalsePositiveAttack>) {
        return "false_positive";
      } else if constexpr (std::is_same_v<T, DistanceBiasAttack>) {
        return "distance_bias";
      } else if constexpr (std::is_same_v<T, FlickerAttack>) {
        return "flicker";
      } else {
        return "none";
      }
    },
    spec);
}

void validate(const AttackSpec & spec)
{
  std::visit(
    [](const auto & a) {
      using T = std::decay_t<decltype(a)>;
      if constexpr (std::is_same_v<T, FalseNegativeAttack>) {
        check_window(a.window);
      } else if constexpr (std::is_same_v<T, FalsePositiveAttack>) {
        check_window(a.window);
        check_range(a.phantom_gap, "phantom_gap", 0.0);
        check_range(a.phantom_rel_speed, "phantom_rel_speed", -kInf);
        if (!(a.phantom_length > 0.0) || a.phantom_confidence < 0.0 || a.phantom_confidence > 1.0) {
          throw ConfigError("attack: invalid phantom geometry");
        }
      } else if constexpr (std::is_same_v<T, DistanceBiasAttack>) {
        if (!(a.factor > 0.0) || !std::isfinite(a.factor)) {
          throw ConfigError("attack: bias factor must be > 0");
        }
        if (a.window) {
          check_window(*a.window);
        }
        check_range(a.ramp, "ramp", 0.0);
      } else if constexpr (std::is_same_v<T, FlickerAttack>) {
        check_window(a.window);
        if (a.drop_prob < 0.0 || a.drop_prob > 1.0) {
          throw ConfigError("attack: flicker drop probability must be in [0,1]");
        }
      }
    },
    spec);
}

double curvature_bias_multiplier(bool curved_road, double kappa)
{
  return curved_road ? std::max(1.0, kappa) : 1.0;
}

double effective_bias_factor(double factor, double kappa)
{
  return 1.0 + kappa * (factor - 1.0);
}

ResolvedAttack resolve_attack(
  const AttackSpec & spec, double hazard_time, double curvature_kappa, Rng & rng)
{
  ResolvedAttack out;
  std::visit(
    [&](const auto & a) {
      using T = std::decay_t<decltype(a)>;
      if constexpr (std::is_same_v<T, FalseNegativeAttack>) {
        place_window(out, draw_window(a.window, hazard_time, rng, false));
        out.kind = AttackKind::kFalseNegative;
      } else if constexpr (std::is_same_v<T, FalsePositiveAttack>) {
        place_window(out, draw_window(a.window, hazard_time, rng, false));
        out.kind = AttackKind::kFalsePositive;
        out.phantom_gap = a.phantom_gap.draw(rng);
        out.phantom_rel_speed = a.phantom_rel_speed.draw(rng);
        out.phantom_length = a.phantom_length;
        out.phantom_confidence = a.phantom_confidence;
      } else if constexpr (std::is_same_v<T, DistanceBiasAttack>) {
        out.kind = AttackKind::kDistanceBias;
        if (a.window) {
          place_window(out, draw_window(*a.window, hazard_time, rng, true));
        } else {
          out.start = -kInf;
          out.end = kInf;
        }
        out.ramp = a.ramp.draw(rng);
        out.factor = effective_bias_factor(a.factor, curvature_kappa);
      } else if constexpr (std::is_same_v<T, FlickerAttack>) {
        place_window(out, draw_window(a.window, hazard_time, rng, false));
        out.kind = AttackKind::kFlicker;
        out.pattern = a.pattern;
        out.drop_prob = a.drop_prob;
      }
    },
    spec);
  return out;
}

std::optional<int> lead_object_id(const WorldState & world, double lane_threshold)
{
  std::optional<int> best;
  double best_gap = kInf;
  for (const auto & obj : world.objects) {
    if (!is_forward(world.ego, obj) || std::abs(obj.lane_offset) >= lane_threshold) {
      continue;
    }
    const double g = gap(world.ego, obj);
    if (g < best_gap) {
      best_gap = g;
      best = obj.id;
    }
  }
  return best;
}

SensorFrame sense(
  const WorldState & world, const SensorConfig & cfg, int frame_index, Rng & rng,
  double extra_lateral_sigma)
{
  SensorFrame out;
  const double lateral_sigma =
    std::sqrt(cfg.lateral_noise_sigma * cfg.lateral_noise_sigma +
              extra_lateral_sigma * extra_lateral_sigma);
  for (const auto & obj : world.objects) {
    // Fixed draw count per object keeps the stream aligned across conditions.
    const bool dropped = rng.bernoulli(cfg.base_drop_prob);
    const double range_noise = rng.normal(0.0, cfg.range_noise_sigma);
    const double lateral_noise = rng.normal(0.0, lateral_sigma);
    const double length_noise = rng.normal(0.0, cfg.length_noise_sigma);

    const double g = gap(world.ego, obj);
    if (!is_forward(world.ego, obj) || !(g > 0.0) || g > cfg.range_max || dropped) {
      continue;
    }
    Detection det;
    det.perceived_gap = g + range_noise;
    det.perceived_lane_offset = obj.lane_offset + lateral_noise;
    det.bbox_length = std::max(0.5, obj.length + length_noise);
    det.confidence = 0.9;
    det.frame_index = frame_index;
    out.detections.push_back(det);
    out.truth_ids.push_back(obj.id);
  }
  return out;
}

void arm_attack(ResolvedAttack & attack, double t, double truth_ttc)
{
  if (!attack.armed || !(truth_ttc < attack.trigger_ttc)) {
    return;
  }
  attack.armed = false;
  attack.start = t + attack.pending_offset;
  attack.end = attack.start + attack.pending_duration;
}

double bias_factor_at(const ResolvedAttack & attack, double t)
{
  if (attack.kind != AttackKind::kDistanceBias || !attack.active(t)) {
    return 1.0;
  }
  if (attack.ramp <= 0.0 || !std::isfinite(attack.start)) {
    return attack.factor;
  }
  const double u = std::clamp((t - attack.start) / attack.ramp, 0.0, 1.0);
  return 1.0 + (attack.factor - 1.0) * u;
}

double phantom_gap_at(const ResolvedAttack & attack, double t)
{
  return attack.phantom_gap - attack.phantom_rel_speed * (t - attack.start);
}

SensorFrame apply_attack(
  const SensorFrame & frame, const WorldState & world, const ResolvedAttack & attack,
  const SensorConfig & cfg, double t, int frame_index, Rng & rng)
{
  switch (attack.kind) {
    case AttackKind::kNone:
      return frame;

    case AttackKind::kFalseNegative: {
      if (!attack.active(t)) {
        return frame;
      }
      const auto lead = lead_object_id(world, cfg.lane_threshold);
      SensorFrame out;
      for (std::size_t i = 0; i < frame.detections.size(); ++i) {
        if (lead && frame.truth_ids[i] == *lead) {
          continue;
        }
        out.detections.push_back(frame.detections[i]);
        out.truth_ids.push_back(frame.truth_ids[i]);
      }
      return out;
    }

    case AttackKind::kFalsePositive: {
      SensorFrame out = frame;
      if (!attack.active(t)) {
        return out;
      }
      const double g = phantom_gap_at(attack, t);
      if (g > 0.0 && g <= cfg.range_max) {
        Detection phantom;
        phantom.perceived_gap = g;
        phantom.perceived_lane_offset = 0.0;
        phantom.bbox_length = attack.phantom_length;
        phantom.confidence = attack.phantom_confidence;
        phantom.frame_index = frame_index;
        out.detections.push_back(phantom);
        out.truth_ids.push_back(-1);
      }
      return out;
    }

    case AttackKind::kDistanceBias: {
      SensorFrame out = frame;
      const double f = bias_factor_at(attack, t);
      for (auto & det : out.detections) {
        det.perceived_gap *= f;
      }
      return out;
    }

    case AttackKind::kFlicker: {
      // Draw unconditionally so the attack stream advances once per frame.
      const bool coin = rng.bernoulli(attack.drop_prob);
      if (!attack.active(t)) {
        return frame;
      }
      bool remove = false;
      if (attack.pattern == FlickerPattern::kAlternateFrames) {
        remove = (frame_index - first_frame_at_or_after(attack.start)) % 2 == 0;
      } else {
        remove = coin;
      }
      if (!remove) {
        return frame;
      }
      const auto lead = lead_object_id(world, cfg.lane_threshold);
      SensorFrame out;
      for (std::size_t i = 0; i < frame.detections.size(); ++i) {
        if (lead && frame.truth_ids[i] == *lead) {
          continue;
        }
        out.detections.push_back(frame.detections[i]);
        out.truth_ids.push_back(frame.truth_ids[i]);
      }
      return out;
    }
  }
  return frame;
}

}  // namespace aebsim
