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

#include "aebsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <utility>

#include "aebsim/controllers.hpp"
#include "aebsim/error.hpp"

namespace aebsim
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

int window_frames(double dt)
{
  return static_cast<int>(std::llround(kOscillationWindow / dt));
}

bool qualifying_change(double a, double b)
{
  return ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) &&
         std::abs(a) >= kOscillationMagnitude && std::abs(b) >= kOscillationMagnitude;
}

}  // namespace

std::vector<double> jerk_series(std::span<const double> accel, double dt)
{
  if (accel.size() < 2) {
    throw FormatError("jerk_series: need at least two samples");
  }
  std::vector<double> out(accel.size());
  for (std::size_t i = 0; i + 1 < accel.size(); ++i) {
    out[i] = (accel[i + 1] - accel[i]) / dt;
  }
  out.back() = (accel.back() - accel[accel.size() - 2]) / dt;
  return out;
}

OscillationResult detect_oscillations(std::span<const double> accel, double dt)
{
  OscillationResult out;
  const std::size_t n = accel.size();
  if (n < 2) {
    return out;
  }
  // prefix[j] = number of qualifying pairs (i, i + 1) with i < j
  std::vector<int> prefix(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    prefix[i] = prefix[i - 1] + (qualifying_change(accel[i - 1], accel[i]) ? 1 : 0);
  }
  const auto w = static_cast<std::size_t>(window_frames(dt));
  std::size_t start = 0;
  while (start + 1 < n) {
    const std::size_t last = std::min(n - 1, start + w);
    if (prefix[last] - prefix[start] >= 2) {
      ++out.window_count;
      start = last;
    } else {
      ++start;
    }
  }
  out.oscillatory = out.window_count > 0;
  return out;
}

BrakeOnset brake_onset_delay(
  std::span<const double> t, std::span<const double> truth_ttc, std::span<const bool> eb_active,
  double ttc_threshold)
{
  BrakeOnset out;
  std::optional<double> crossing;
  std::optional<double> onset;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!crossing && truth_ttc[i] < ttc_threshold) {
      crossing = t[i];
    }
    if (!onset && eb_active[i]) {
      onset = t[i];
    }
  }
  if (!crossing || !onset) {
    return out;
  }
  const double d = *onset - *crossing;
  if (d < 0.0) {
    out.delay = 0.0;
    out.early = true;
  } else {
    out.delay = d;
  }
  return out;
}

std::vector<EbEpisode> eb_episodes(std::span<const bool> eb_active)
{
  std::vector<EbEpisode> out;
  std::size_t i = 0;
  while (i < eb_active.size()) {
    if (!eb_active[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < eb_active.size() && eb_active[j]) {
      ++j;
    }
    out.push_back({i, j});
    i = j;
  }
  return out;
}

RunMetrics compute_run_metrics(const RunTrace & trace)
{
  const auto & rows = trace.rows;
  const auto & meta = trace.meta;
  if (rows.size() < 2) {
    throw FormatError("trace: fewer than two rows");
  }
  const double dt = meta.frame_dt;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i].t - static_cast<double>(i) * dt) > 1e-6) {
      throw FormatError("trace: missing or out-of-order frame near t=" + std::to_string(rows[i].t));
    }
  }
  const bool reached_end = rows.back().t >= meta.duration - 1e-6;
  const bool stopped = rows.back().v < 0.01;
  if (!meta.collided && !reached_end && !stopped) {
    throw FormatError("trace: truncated before the run end");
  }

  const std::size_t n = rows.size();
  std::vector<double> t(n), a_real(n), a_cmd(n), ttc_truth(n);
  std::vector<bool> eb_vec(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = rows[i].t;
    a_real[i] = rows[i].a_realized;
    a_cmd[i] = rows[i].a_cmd;
    ttc_truth[i] = rows[i].truth_ttc;
    eb_vec[i] = rows[i].eb_active;
  }
  // std::vector<bool> has no contiguous storage; copy into a plain array
  std::unique_ptr<bool[]> eb(new bool[n]);
  std::copy(eb_vec.begin(), eb_vec.end(), eb.get());
  const std::span<const bool> eb_span(eb.get(), n);

  RunMetrics m;
  m.collision = meta.collided;
  m.collision_time = meta.collision_time;
  m.impact_speed = meta.impact_speed;

  m.min_gap = kInf;
  m.min_ttc_truth = kInf;
  m.min_ttc_perceived = kInf;
  double speed_sum = 0.0;
  for (const auto & r : rows) {
    if (!std::isnan(r.truth_gap)) {
      m.min_gap = std::min(m.min_gap, r.truth_gap);
    }
    m.min_ttc_truth = std::min(m.min_ttc_truth, r.truth_ttc);
    if (!std::isnan(r.perceived_gap)) {
      m.min_ttc_perceived = std::min(m.min_ttc_perceived, ttc(r.perceived_gap, r.perceived_vrel));
    }
    m.peak_decel = std::max(m.peak_decel, -r.a_realized);
    speed_sum += r.v;
    if (meta.has_follower && r.follower_v > 0.1 && !std::isnan(r.follower_gap)) {
      const double h = r.follower_gap / r.follower_v;
      m.min_follower_headway = m.min_follower_headway ? std::min(*m.min_follower_headway, h) : h;
    }
  }
  m.mean_speed = speed_sum / static_cast<double>(n);

  const auto jerk = jerk_series(a_real, dt);
  double abs_sum = 0.0;
  for (double j : jerk) {
    m.peak_jerk = std::max(m.peak_jerk, std::abs(j));
    abs_sum += std::abs(j);
  }
  m.mean_abs_jerk = abs_sum / static_cast<double>(n);

  const auto osc = detect_oscillations(a_cmd, dt);
  m.oscillatory_window_count = osc.window_count;
  m.oscillatory = osc.oscillatory;

  const auto onset = brake_onset_delay(t, ttc_truth, eb_span, meta.ttc_threshold);
  m.brake_onset_delay = onset.delay;
  m.early_brake = onset.early;
  if (!m.brake_onset_delay && meta.collided) {
    // no EB before impact: the delay is censored at the collision time
    const auto cross = std::find_if(
      ttc_truth.begin(), ttc_truth.end(), [&](double v) { return v < meta.ttc_threshold; });
    if (cross != ttc_truth.end()) {
      m.brake_onset_delay = meta.collision_time - t[static_cast<std::size_t>(cross - ttc_truth.begin())];
    }
  }

  const auto tol = static_cast<std::size_t>(std::llround(kFalseEbTolerance / dt));
  const auto watch = static_cast<std::size_t>(std::llround(kFollowerWatch / dt));
  // realized decel trails the command by the actuator lag
  constexpr std::size_t kLagFrames = 3;
  const double justify_ttc = kFalseEbTtcFactor * meta.ttc_threshold;
  for (const auto & ep : eb_episodes(eb_span)) {
    ++m.eb_event_count;
    m.eb_onset_truth_ttc.push_back(ttc_truth[ep.begin]);
    double peak = 0.0;
    for (std::size_t i = ep.begin; i < std::min(n, ep.end + kLagFrames); ++i) {
      peak = std::max(peak, -a_real[i]);
    }
    m.eb_peak_decels.push_back(peak);
    const std::size_t lo = ep.begin >= tol ? ep.begin - tol : 0;
    const std::size_t hi = std::min(n, ep.end + tol);
    bool justified = false;
    for (std::size_t i = lo; i < hi; ++i) {
      if (ttc_truth[i] < justify_ttc) {
        justified = true;
        break;
      }
    }
    if (justified) {
      continue;
    }
    ++m.false_eb_count;
    m.false_eb_peak_decels.push_back(peak);
    if (meta.has_follower) {
      for (std::size_t i = ep.begin; i < std::min(n, ep.begin + watch + 1); ++i) {
        const auto & r = rows[i];
        if (r.follower_v > 0.1 && !std::isnan(r.follower_gap)) {
          const double h = r.follower_gap / r.follower_v;
          m.follower_headway_after_false_eb =
            m.follower_headway_after_false_eb ? std::min(*m.follower_headway_after_false_eb, h) : h;
        }
      }
    }
  }

  // Time to cover the route; extrapolated at the mean speed when not reached.
  const double s0 = rows.front().s_front;
  m.travel_time = kInf;
  for (std::size_t i = 1; i < n; ++i) {
    const double d0 = rows[i - 1].s_front - s0;
    const double d1 = rows[i].s_front - s0;
    if (d1 >= meta.route_length) {
      const double frac = d1 > d0 ? (meta.route_length - d0) / (d1 - d0) : 0.0;
      m.travel_time = t[i - 1] + frac * (t[i] - t[i - 1]);
      break;
    }
  }
  if (std::isinf(m.travel_time)) {
    const double remaining = meta.route_length - (rows.back().s_front - s0);
    m.travel_time = t.back() + remaining / std::max(m.mean_speed, 0.1);
  }
  return m;
}

Interval wilson_interval(std::size_t successes, std::size_t n, double z)
{
  if (n == 0) {
    return {0.0, 1.0};
  }
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

Summary summarize(std::vector<double> values)
{
  std::erase_if(values, [](double v) { return std::isnan(v); });
  Summary s;
  s.n = values.size();
  if (values.empty()) {
    s.mean = s.std = s.p50 = s.p95 = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  std::sort(values.begin(), values.end());
  // sorted order makes the sums independent of input order
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (std::isinf(s.mean) || s.n < 2) {
    s.std = 0.0;
  } else {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - s.mean) * (v - s.mean);
    }
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(s.n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, s.n - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0 || values[lo] == values[hi]) {
      return values[lo];
    }
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  s.p50 = quantile(0.5);
  s.p95 = quantile(0.95);
  return s;
}

RateStat rate_stat(std::size_t count, std::size_t n)
{
  RateStat r;
  r.count = count;
  r.n = n;
  r.rate = n > 0 ? static_cast<double>(count) / static_cast<double>(n) : 0.0;
  r.ci = wilson_interval(count, n);
  return r;
}

std::vector<GroupSummary> aggregate(std::span<const MetricsEntry> entries)
{
  std::map<std::pair<std::string, std::string>, std::vector<const MetricsEntry *>> groups;
  for (const auto & e : entries) {
    groups[{e.family, e.condition}].push_back(&e);
  }
  std::vector<GroupSummary> out;
  for (const auto & [key, members] : groups) {
    GroupSummary g;
    g.family = key.first;
    g.condition = key.second;
    g.runs = members.size();
    std::size_t collisions = 0, eb = 0, false_eb = 0, osc = 0, ok = 0;
    std::vector<double> min_gap, ttc_t, ttc_p, decel, pjerk, mjerk, delay, speed, travel, fh;
    for (const auto * e : members) {
      if (!e->metrics) {
        ++g.failed;
        continue;
      }
      const auto & m = *e->metrics;
      ++ok;
      collisions += m.collision ? 1 : 0;
      eb += m.eb_event_count > 0 ? 1 : 0;
      false_eb += m.false_eb_count > 0 ? 1 : 0;
      osc += m.oscillatory ? 1 : 0;
      min_gap.push_back(m.min_gap);
      ttc_t.push_back(m.min_ttc_truth);
      ttc_p.push_back(m.min_ttc_perceived);
      decel.push_back(m.peak_decel);
      pjerk.push_back(m.peak_jerk);
      mjerk.push_back(m.mean_abs_jerk);
      if (m.brake_onset_delay) {
        delay.push_back(*m.brake_onset_delay);
      }
      speed.push_back(m.mean_speed);
      travel.push_back(m.travel_time);
      if (m.min_follower_headway) {
        fh.push_back(*m.min_follower_headway);
      }
    }
    g.collision = rate_stat(collisions, ok);
    g.eb = rate_stat(eb, ok);
    g.false_eb = rate_stat(false_eb, ok);
    g.oscillatory = rate_stat(osc, ok);
    g.min_gap = summarize(std::move(min_gap));
    g.min_ttc_truth = summarize(std::move(ttc_t));
    g.min_ttc_perceived = summarize(std::move(ttc_p));
    g.peak_decel = summarize(std::move(decel));
    g.peak_jerk = summarize(std::move(pjerk));
    g.mean_abs_jerk = summarize(std::move(mjerk));
    g.brake_onset_delay = summarize(std::move(delay));
    g.mean_speed = summarize(std::move(speed));
    g.travel_time = summarize(std::move(travel));
    g.min_follower_headway = summarize(std::move(fh));
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace aebsim
