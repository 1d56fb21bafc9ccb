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

#ifndef AEBSIM__TRACE_HPP_
#define AEBSIM__TRACE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "aebsim/controllers.hpp"

namespace aebsim
{

inline constexpr int kTraceSchemaVersion = 1;

/// One control frame. Truth columns refer to the nearest in-lane forward
/// object; missing values are NaN (track_id -1).
struct TraceRow
{
  double t{0.0};
  double s_front{0.0};
  double v{0.0};
  double a_realized{0.0};
  double a_cmd{0.0};
  CommandSource source{CommandSource::kIdle};
  bool eb_active{false};
  double truth_gap{0.0};
  double truth_vrel{0.0};
  double truth_ttc{0.0};
  double perceived_gap{0.0};
  double perceived_vrel{0.0};
  int track_id{-1};
  int track_age{0};
  double instability{0.0};
  bool fallback_active{false};
  bool attack_active{false};
  bool phantom_active{false};
  double follower_gap{0.0};
  double follower_v{0.0};
};

/// Everything compute_run_metrics needs besides the rows.
struct TraceMeta
{
  int schema_version{kTraceSchemaVersion};
  std::string family;
  std::uint64_t seed{0};
  std::string condition;
  double frame_dt{0.1};
  double ttc_threshold{1.2};
  double route_length{0.0};
  double initial_gap{0.0};
  bool has_follower{false};
  bool collided{false};
  int collision_object{-1};
  double collision_time{0.0};
  double impact_speed{0.0};
  double duration{40.0};
};

struct RunTrace
{
  TraceMeta meta;
  std::vector<TraceRow> rows;
};

}  // namespace aebsim

#endif  // AEBSIM__TRACE_HPP_
