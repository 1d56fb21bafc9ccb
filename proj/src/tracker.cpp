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

#include "aebsim/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "aebsim/error.hpp"

namespace aebsim
{

void TrackerConfig::validate() const
{
  if (!(gate_radius > 0.0) || drop_after_missed < 1 || !(alpha > 0.0) || alpha > 1.0 ||
      !(beta > 0.0) || beta > 1.0 || confirm_frames < 1 || !(lane_gate > 0.0) ||
      !(length_tolerance > 0.0) || !(lateral_gain > 0.0) || lateral_gain > 1.0 ||
      !(lane_threshold > 0.0)) {
    throw ConfigError("tracker: invalid configuration");
  }
}

namespace
{

double predicted_gap(const Track & track, double dt)
{
  return track.gap_est - track.v_rel_est * dt;
}

bool boxes_overlap(const Track & track, const Detection & det, const TrackerConfig & cfg)
{
  if (std::abs(det.perceived_lane_offset - track.lane_offset_est) >= cfg.lane_gate) {
    return false;
  }
  return std::abs(det.bbox_length - track.length_est) <= cfg.length_tolerance * track.length_est;
}

}  // namespace

Assignment associate(
  std::span<const Track> tracks, std::span<const Detection> dets, const TrackerConfig & cfg,
  double dt)
{
  struct Candidate
  {
    double distance;
    int track_id;
    std::size_t track_idx;
    std::size_t det_idx;
  };
  std::vector<Candidate> candidates;
  for (std::size_t ti = 0; ti < tracks.size(); ++ti) {
    const double pred = predicted_gap(tracks[ti], dt);
    for (std::size_t di = 0; di < dets.size(); ++di) {
      const double d = std::abs(dets[di].perceived_gap - pred);
      if (d < cfg.gate_radius && boxes_overlap(tracks[ti], dets[di], cfg)) {
        candidates.push_back({d, tracks[ti].track_id, ti, di});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate & a, const Candidate & b) {
    return std::tie(a.distance, a.track_id, a.det_idx) < std::tie(b.distance, b.track_id, b.det_idx);
  });

  std::vector<bool> track_used(tracks.size(), false);
  std::vector<bool> det_used(dets.size(), false);
  Assignment out;
  for (const auto & c : candidates) {
    if (track_used[c.track_idx] || det_used[c.det_idx]) {
      continue;
    }
    track_used[c.track_idx] = true;
    det_used[c.det_idx] = true;
    out.pairs.emplace_back(c.track_idx, c.det_idx);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  for (std::size_t ti = 0; ti < tracks.size(); ++ti) {
    if (!track_used[ti]) {
      out.unmatched_tracks.push_back(ti);
    }
  }
  for (std::size_t di = 0; di < dets.size(); ++di) {
    if (!det_used[di]) {
      out.unmatched_detections.push_back(di);
    }
  }
  return out;
}

std::vector<Track> update_tracks(
  std::span<const Track> tracks, std::span<const Detection> dets, const Assignment & assignment,
  const TrackerConfig & cfg, double dt, int & next_id)
{
  std::vector<Track> out;
  out.reserve(tracks.size() + assignment.unmatched_detections.size());

  std::vector<int> match_of(tracks.size(), -1);
  for (const auto & [ti, di] : assignment.pairs) {
    match_of[ti] = static_cast<int>(di);
  }

  for (std::size_t ti = 0; ti < tracks.size(); ++ti) {
    Track t = tracks[ti];
    const double pred = predicted_gap(t, dt);
    if (match_of[ti] >= 0) {
      const Detection & det = dets[static_cast<std::size_t>(match_of[ti])];
      const double residual = det.perceived_gap - pred;
      t.gap_est = pred + cfg.alpha * residual;
      t.v_rel_est -= (cfg.beta / dt) * residual;
      t.lane_offset_est += cfg.lateral_gain * (det.perceived_lane_offset - t.lane_offset_est);
      t.length_est += cfg.lateral_gain * (det.bbox_length - t.length_est);
      t.confidence = det.confidence;
      t.age_frames += 1;
      t.missed_frames = 0;
      out.push_back(t);
      continue;
    }
    const bool tentative = t.age_frames < cfg.confirm_frames;
    if (tentative || t.missed_frames + 1 > cfg.drop_after_missed) {
      continue;
    }
    t.gap_est = pred;
    t.missed_frames += 1;
    t.age_frames = 1;
    t.confidence *= 0.5;
    out.push_back(t);
  }

  for (const auto di : assignment.unmatched_detections) {
    const Detection & det = dets[di];
    Track t;
    t.track_id = next_id++;
    t.gap_est = det.perceived_gap;
    t.v_rel_est = 0.0;
    t.lane_offset_est = det.perceived_lane_offset;
    t.length_est = det.bbox_length;
    t.age_frames = 1;
    t.missed_frames = 0;
    t.confidence = det.confidence;
    out.push_back(t);
  }
  return out;
}

std::optional<Track> primary_object(std::span<const Track> tracks, double lane_threshold)
{
  std::optional<Track> best;
  for (const auto & t : tracks) {
    if (std::abs(t.lane_offset_est) >= lane_threshold) {
      continue;
    }
    if (!best || t.gap_est < best->gap_est ||
        (t.gap_est == best->gap_est && t.track_id < best->track_id)) {
      best = t;
    }
  }
  return best;
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(cfg)
{
  cfg_.validate();
}

const std::vector<Track> & Tracker::step(std::span<const Detection> dets, double dt)
{
  const auto assignment = associate(tracks_, dets, cfg_, dt);
  tracks_ = update_tracks(tracks_, dets, assignment, cfg_, dt, next_id_);
  return tracks_;
}

std::optional<Track> Tracker::primary() const
{
  return primary_object(tracks_, cfg_.lane_threshold);
}

}  // namespace aebsim
