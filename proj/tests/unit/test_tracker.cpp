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

#include "aebsim/error.hpp"
#include "aebsim/tracker.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

namespace aebsim
{
namespace
{

constexpr double kDt = 0.1;

Detection det_at(double gap_m, double lane_offset = 0.0)
{
  Detection d;
  d.perceived_gap = gap_m;
  d.perceived_lane_offset = lane_offset;
  return d;
}

Track track_at(int id, double gap_m, double v_rel = 0.0, double lane_offset = 0.0)
{
  Track t;
  t.track_id = id;
  t.gap_est = gap_m;
  t.v_rel_est = v_rel;
  t.lane_offset_est = lane_offset;
  return t;
}

TEST(Associate, InsideGateMatches)
{
  const std::vector<Track> tracks{track_at(1, 30.0)};
  const std::vector<Detection> dets{det_at(30.5)};
  const auto a = associate(tracks, dets, TrackerConfig{}, kDt);
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_TRUE(a.unmatched_detections.empty());
}

TEST(Associate, OutsideGateSeedsNewTrack)
{
  const std::vector<Track> tracks{track_at(1, 30.0)};
  const std::vector<Detection> dets{det_at(40.0)};
  const auto a = associate(tracks, dets, TrackerConfig{}, kDt);
  EXPECT_TRUE(a.pairs.empty());
  ASSERT_EQ(a.unmatched_detections.size(), 1u);
  ASSERT_EQ(a.unmatched_tracks.size(), 1u);
}

TEST(Associate, UsesPredictedGap)
{
  // Closing at 20 m/s: prediction is 28 m, so a detection at 28.2 matches and 31 does not.
  const std::vector<Track> tracks{track_at(1, 30.0, 20.0)};
  const std::vector<Detection> near{det_at(28.2)};
  EXPECT_EQ(associate(tracks, near, TrackerConfig{}, kDt).pairs.size(), 1u);
  TrackerConfig tight;
  tight.gate_radius = 1.0;
  const std::vector<Detection> far{det_at(30.0)};
  EXPECT_TRUE(associate(tracks, far, tight, kDt).pairs.empty());
}

TEST(Associate, TieGoesToLowerTrackId)
{
  const std::vector<Track> tracks{track_at(7, 31.0), track_at(3, 29.0)};
  const std::vector<Detection> dets{det_at(30.0)};
  const auto a = associate(tracks, dets, TrackerConfig{}, kDt);
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(tracks[a.pairs[0].first].track_id, 3);
}

TEST(Associate, IncompatibleLaneDoesNotMatch)
{
  const std::vector<Track> tracks{track_at(1, 30.0, 0.0, 0.0)};
  const std::vector<Detection> dets{det_at(30.0, 3.5)};
  EXPECT_TRUE(associate(tracks, dets, TrackerConfig{}, kDt).pairs.empty());
}

TEST(Associate, EachDetectionMatchesAtMostOneTrack)
{
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> g(5.0, 60.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Track> tracks;
    std::vector<Detection> dets;
    for (int i = 0; i < 5; ++i) {
      tracks.push_back(track_at(i + 1, g(gen)));
      dets.push_back(det_at(g(gen)));
    }
    const auto a = associate(tracks, dets, TrackerConfig{}, kDt);
    std::set<std::size_t> used_t;
    std::set<std::size_t> used_d;
    for (const auto & [ti, di] : a.pairs) {
      EXPECT_TRUE(used_t.insert(ti).second);
      EXPECT_TRUE(used_d.insert(di).second);
    }
    EXPECT_EQ(a.pairs.size() + a.unmatched_tracks.size(), tracks.size());
    EXPECT_EQ(a.pairs.size() + a.unmatched_detections.size(), dets.size());
  }
}

TEST(Tracker, NewTracksStartFreshWithUniqueIds)
{
  Tracker tracker(TrackerConfig{});
  const std::vector<Detection> dets{det_at(30.0), det_at(60.0)};
  const auto & tracks = tracker.step(dets, kDt);
  ASSERT_EQ(tracks.size(), 2u);
  for (const auto & t : tracks) {
    EXPECT_EQ(t.age_frames, 1);
    EXPECT_EQ(t.v_rel_est, 0.0);
    EXPECT_EQ(t.missed_frames, 0);
  }
  EXPECT_NE(tracks[0].track_id, tracks[1].track_id);
}

TEST(Tracker, DeletedTrackReappearsWithNewId)
{
  TrackerConfig cfg;
  Tracker tracker(cfg);
  const std::vector<Detection> lead{det_at(30.0)};
  for (int i = 0; i < 5; ++i) {
    tracker.step(lead, kDt);
  }
  const int first_id = tracker.tracks().at(0).track_id;
  for (int i = 0; i < cfg.drop_after_missed + 1; ++i) {
    tracker.step({}, kDt);
  }
  EXPECT_TRUE(tracker.tracks().empty());
  tracker.step(lead, kDt);
  ASSERT_EQ(tracker.tracks().size(), 1u);
  EXPECT_NE(tracker.tracks()[0].track_id, first_id);
  EXPECT_EQ(tracker.tracks()[0].age_frames, 1);
  EXPECT_EQ(tracker.tracks()[0].v_rel_est, 0.0);
}

TEST(Tracker, ConfirmedTrackCoastsOneFrame)
{
  Tracker tracker(TrackerConfig{});
  double g = 40.0;
  for (int i = 0; i < 20; ++i, g -= 0.5) {
    tracker.step(std::vector<Detection>{det_at(g)}, kDt);
  }
  const Track before = tracker.tracks().at(0);
  tracker.step({}, kDt);
  ASSERT_EQ(tracker.tracks().size(), 1u);
  const Track & coasting = tracker.tracks()[0];
  EXPECT_EQ(coasting.track_id, before.track_id);
  EXPECT_EQ(coasting.missed_frames, 1);
  EXPECT_NEAR(coasting.gap_est, before.gap_est - before.v_rel_est * kDt, 1e-12);
}

TEST(Tracker, StationaryTargetVelocityDecaysToZero)
{
  Tracker tracker(TrackerConfig{});
  for (int i = 0; i < 50; ++i) {
    tracker.step(std::vector<Detection>{det_at(25.0)}, kDt);
  }
  EXPECT_NEAR(tracker.tracks().at(0).v_rel_est, 0.0, 1e-12);
  EXPECT_NEAR(tracker.tracks().at(0).gap_est, 25.0, 1e-12);
}

TEST(Tracker, ClosingSpeedConvergesWithinTenFrames)
{
  const TrackerConfig cfg;
  // Independent alpha-beta recursion on the same measurement sequence.
  double g_ref = 0.0;
  double v_ref = 0.0;
  Tracker tracker(cfg);
  const double g0 = 60.0;
  for (int frame = 1; frame <= 30; ++frame) {
    const double z = g0 - 5.0 * kDt * (frame - 1);
    if (frame == 1) {
      g_ref = z;
    } else {
      const double pred = g_ref - v_ref * kDt;
      const double r = z - pred;
      g_ref = pred + cfg.alpha * r;
      v_ref = v_ref - cfg.beta / kDt * r;
    }
    tracker.step(std::vector<Detection>{det_at(z)}, kDt);
    const Track & t = tracker.tracks().at(0);
    EXPECT_NEAR(t.v_rel_est, v_ref, 1e-12) << "frame " << frame;
    EXPECT_NEAR(t.gap_est, g_ref, 1e-12) << "frame " << frame;
    if (frame >= 10) {
      EXPECT_NEAR(t.v_rel_est, 5.0, 0.01) << "frame " << frame;
    }
  }
}

TEST(Tracker, NoiselessLeadKeepsIdentityAndAgesMonotonically)
{
  Tracker tracker(TrackerConfig{});
  int id = -1;
  int age = 0;
  double g = 50.0;
  for (int i = 0; i < 400; ++i, g -= 0.05 * std::sin(0.05 * i)) {
    tracker.step(std::vector<Detection>{det_at(g)}, kDt);
    ASSERT_EQ(tracker.tracks().size(), 1u);
    const Track & t = tracker.tracks()[0];
    if (id < 0) {
      id = t.track_id;
    }
    ASSERT_EQ(t.track_id, id);
    ASSERT_EQ(t.age_frames, age + 1);
    age = t.age_frames;
  }
}

TEST(Tracker, AlternateFrameFlickerKeepsAgeBounded)
{
  Tracker tracker(TrackerConfig{});
  std::set<int> ids;
  for (int i = 0; i < 200; ++i) {
    const std::vector<Detection> dets =
      i % 2 == 0 ? std::vector<Detection>{det_at(30.0)} : std::vector<Detection>{};
    tracker.step(dets, kDt);
    for (const auto & t : tracker.tracks()) {
      ASSERT_LE(t.age_frames, 2);
      ids.insert(t.track_id);
    }
  }
  EXPECT_GT(ids.size(), 50u);
}

TEST(Tracker, RandomSequencesRespectInvariants)
{
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TrackerConfig cfg;
  Tracker tracker(cfg);
  std::set<int> retired;
  std::set<int> live_prev;
  for (int i = 0; i < 5000; ++i) {
    std::vector<Detection> dets;
    const int n = static_cast<int>(u(gen) * 4);
    for (int k = 0; k < n; ++k) {
      dets.push_back(det_at(5.0 + 80.0 * u(gen), u(gen) < 0.7 ? 0.0 : 3.5));
    }
    const std::size_t before = tracker.tracks().size();
    const auto & tracks = tracker.step(dets, kDt);
    EXPECT_LE(tracks.size(), dets.size() + before);
    std::set<int> live;
    for (const auto & t : tracks) {
      ASSERT_GE(t.age_frames, 1);
      ASSERT_LE(t.missed_frames, cfg.drop_after_missed);
      ASSERT_EQ(retired.count(t.track_id), 0u) << "id reused";
      live.insert(t.track_id);
    }
    for (int id : live_prev) {
      if (live.count(id) == 0) {
        retired.insert(id);
      }
    }
    live_prev = live;
  }
}

TEST(PrimaryObject, NearestInLaneTrack)
{
  const std::vector<Track> tracks{track_at(1, 50.0), track_at(2, 30.0), track_at(3, 12.0)};
  const auto p = primary_object(tracks, 1.5);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->track_id, 3);
  const std::vector<Track> adjacent{track_at(1, 10.0, 0.0, 3.5)};
  EXPECT_FALSE(primary_object(adjacent, 1.5).has_value());
  EXPECT_FALSE(primary_object({}, 1.5).has_value());
}

TEST(TrackerConfig, ValidationRejectsOutOfRangeGains)
{
  TrackerConfig cfg;
  cfg.beta = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrackerConfig{};
  cfg.alpha = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrackerConfig{};
  cfg.drop_after_missed = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace aebsim
