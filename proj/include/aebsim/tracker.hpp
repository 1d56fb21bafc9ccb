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

#ifndef AEBSIM__TRACKER_HPP_
#define AEBSIM__TRACKER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "aebsim/perception.hpp"

namespace aebsim
{

/// Persistent perceived object.
///
/// `age_frames` is the current run of consecutive associated frames; a coast
/// breaks the run and resets it to 1. `v_rel_est` is positive when closing.
struct Track
{
  int track_id{0};
  double gap_est{0.0};
  double v_rel_est{0.0};
  double lane_offset_est{0.0};
  double length_est{4.5};
  int age_frames{1};
  int missed_frames{0};
  double confidence{0.0};
};

struct TrackerConfig
{
  double gate_radius{2.5};
  int drop_after_missed{1};
  double alpha{0.85};
  double beta{0.4};
  /// Tracks with a shorter hit streak are tentative and deleted on their first miss.
  int confirm_frames{3};
  /// Lane offsets are compatible when they differ by less than this [m].
  double lane_gate{1.5};
  /// Relative bbox length mismatch tolerated by the overlap test.
  double length_tolerance{0.5};
  double lateral_gain{0.6};
  /// In-lane test for primary object selection [m].
  double lane_threshold{1.5};

  void validate() const;
};

struct Assignment
{
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  ///< (track index, detection index)
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::size_t> unmatched_detections;
};

/// Greedy nearest-neighbour association on predicted gap with a lane / bbox
/// overlap test. Ties: smaller distance, then lower track id.
Assignment associate(
  std::span<const Track> tracks, std::span<const Detection> dets, const TrackerConfig & cfg,
  double dt);

/// Alpha-beta update of matched tracks, coast / delete of unmatched tracks,
/// spawn of new tracks. `next_id` is advanced for every spawned track.
std::vector<Track> update_tracks(
  std::span<const Track> tracks, std::span<const Detection> dets, const Assignment & assignment,
  const TrackerConfig & cfg, double dt, int & next_id);

/// Nearest in-lane live track.
std::optional<Track> primary_object(std::span<const Track> tracks, double lane_threshold);

/// Stateful wrapper owned by a run loop.
class Tracker
{
public:
  explicit Tracker(TrackerConfig cfg);

  const std::vector<Track> & step(std::span<const Detection> dets, double dt);
  const std::vector<Track> & tracks() const { return tracks_; }
  std::optional<Track> primary() const;
  const TrackerConfig & config() const { return cfg_; }

private:
  TrackerConfig cfg_;
  std::vector<Track> tracks_;
  int next_id_{1};
};

}  // namespace aebsim

#endif  // AEBSIM__TRACKER_HPP_
