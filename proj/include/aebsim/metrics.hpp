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

#ifndef AEBSIM__METRICS_HPP_
#define AEBSIM__METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aebsim/trace.hpp"

namespace aebsim
{

inline constexpr double kOscillationWindow = 1.5;
inline constexpr double kOscillationMagnitude = 2.0;
inline constexpr double kFalseEbTolerance = 0.5;
/// An EB episode is justified when truth TTC falls below this multiple of the trigger threshold.
inline constexpr double kFalseEbTtcFactor = 1.5;
inline constexpr double kFollowerWatch = 3.0;

struct RunMetrics
{
  bool collision{false};
  double collision_time{0.0};
  double impact_speed{0.0};
  double min_gap{0.0};
  double min_ttc_truth{0.0};
  double min_ttc_perceived{0.0};
  int eb_event_count{0};
  int false_eb_count{0};
  double peak_decel{0.0};
  double peak_jerk{0.0};
  double mean_abs_jerk{0.0};
  int oscillatory_window_count{0};
  bool oscillatory{false};
  std::optional<double> brake_onset_delay;
  bool early_brake{false};
  double mean_speed{0.0};
  double travel_time{0.0};
  std::optional<double> min_follower_headway;
  /// Minimum follower headway within a short horizon after a false EB onset.
  std::optional<double> follower_headway_after_false_eb;
  /// Truth TTC at the onset frame of each EB episode.
  std::vector<double> eb_onset_truth_ttc;
  /// Peak realized decel over each EB episode, magnitude.
  std::vector<double> eb_peak_decels;
  /// Peak realized decel over each false EB episode, magnitude.
  std::vector<double> false_eb_peak_decels;

  bool operator==(const RunMetrics &) const = default;
};

/// Forward differences, backward difference at the last sample.
std::vector<double> jerk_series(std::span<const double> accel, double dt);

struct OscillationResult
{
  int window_count{0};
  bool oscillatory{false};
};

/// Counts 1.5 s windows holding at least two large sign changes. After a
/// counted window the scan resumes at that window's last sample.
OscillationResult detect_oscillations(std::span<const double> accel, double dt);

struct BrakeOnset
{
  std::optional<double> delay;
  bool early{false};
};

BrakeOnset brake_onset_delay(
  std::span<const double> t, std::span<const double> truth_ttc, std::span<const bool> eb_active,
  double ttc_threshold);

/// Episodes are maximal runs of consecutive eb_active frames.
struct EbEpisode
{
  std::size_t begin{0};
  std::size_t end{0};  ///< exclusive
};

std::vector<EbEpisode> eb_episodes(std::span<const bool> eb_active);

RunMetrics compute_run_metrics(const RunTrace & trace);

struct Interval
{
  double lo{0.0};
  double hi{0.0};
};

Interval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

struct Summary
{
  double mean{0.0};
  double std{0.0};
  double p50{0.0};
  double p95{0.0};
  std::size_t n{0};
};

/// NaN entries are skipped. Sample standard deviation, 0 for n < 2.
/// Percentiles use linear interpolation between order statistics.
Summary summarize(std::vector<double> values);

struct RateStat
{
  std::size_t count{0};
  std::size_t n{0};
  double rate{0.0};
  Interval ci;
};

RateStat rate_stat(std::size_t count, std::size_t n);

struct GroupSummary
{
  std::string family;
  std::string condition;
  std::size_t runs{0};
  std::size_t failed{0};
  RateStat collision;
  RateStat eb;
  RateStat false_eb;
  RateStat oscillatory;
  Summary min_gap;
  Summary min_ttc_truth;
  Summary min_ttc_perceived;
  Summary peak_decel;
  Summary peak_jerk;
  Summary mean_abs_jerk;
  Summary brake_onset_delay;
  Summary mean_speed;
  Summary travel_time;
  Summary min_follower_headway;
};

struct MetricsEntry
{
  std::string family;
  std::string condition;
  std::optional<RunMetrics> metrics;  ///< empty for a failed run
};

/// One row per (family, condition), sorted by family then condition label.
std::vector<GroupSummary> aggregate(std::span<const MetricsEntry> entries);

}  // namespace aebsim

#endif  // AEBSIM__METRICS_HPP_
