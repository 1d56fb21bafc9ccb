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

// Acceptance suite: runs the shipped experiments and prints one PASS/FAIL
// line per criterion. Exit status is non-zero when any criterion fails.

#include <fmt/core.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aebsim/config.hpp"
#include "aebsim/controllers.hpp"
#include "aebsim/dynamics.hpp"
#include "aebsim/harness.hpp"
#include "aebsim/metrics.hpp"
#include "support/oracles.hpp"

namespace
{

using aebsim::RunMetrics;
using aebsim::RunRecord;

// Pinned thresholds.
constexpr double kBaselineEbRateLo = 0.02;
constexpr double kBaselineEbRateHi = 0.15;
constexpr double kOnsetTruthTtc = 1.8;
constexpr double kJerkBar = 4.0;
constexpr double kJerkShare = 0.95;
constexpr double kFnCollisionRate = 0.10;
constexpr double kFnMedianDelay = 0.3;
constexpr double kFnMinTtcRatio = 0.6;
constexpr double kFpFalseEbRate = 0.25;
constexpr double kFpHardDecel = 6.0;
constexpr double kFollowerHeadway = 1.2;
constexpr double kFollowerShare = 0.10;
constexpr double kBiasDelayGain = 0.2;
constexpr double kBiasEbRatio = 1.3;
constexpr double kBiasSpeedRatio = 0.95;
constexpr double kFlickerOscRate = 0.30;
constexpr double kFlickerJerkRatio = 2.0;
constexpr double kPersistenceCut = 0.50;
constexpr double kRateLimitJerkCut = 0.30;
constexpr double kRateLimitOscCut = 0.50;
constexpr double kFallbackFnCut = 0.40;
constexpr double kAllOnCollisionCut = 0.50;
constexpr double kAllOnFalseEbCut = 0.40;
constexpr double kAllOnTravelIncrease = 0.15;
constexpr double kLagRelTol = 1e-9;
// Times live on the 0.1 s frame grid; differences carry rounding error.
constexpr double kGridEps = 1e-9;
constexpr double kWilsonTol = 1e-12;
constexpr int kRandomSteps = 1'000'000;
constexpr int kOscillationSeries = 1000;
constexpr int kDeterminismRuns = 6;

const std::vector<std::string> kPlainConditions{
  "baseline", "fn", "fp", "bias_plus", "bias_minus", "flicker"};

struct Result
{
  bool passed{true};
  std::vector<std::string> notes;

  void check(bool ok, std::string note)
  {
    passed = passed && ok;
    notes.push_back(fmt::format("{} [{}]", note, ok ? "ok" : "miss"));
  }
};

class Records
{
public:
  explicit Records(std::vector<RunRecord> records) : records_(std::move(records)) {}

  /// Metrics of successful runs; family "*" pools every family.
  std::vector<const RunMetrics *> select(const std::string & family, const std::string & condition) const
  {
    std::vector<const RunMetrics *> out;
    for (const auto & r : records_) {
      if (r.condition == condition && (family == "*" || r.family == family) && r.metrics) {
        out.push_back(&*r.metrics);
      }
    }
    return out;
  }

  std::size_t failed() const
  {
    return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(), [](const RunRecord & r) { return !r.error.empty(); }));
  }

  const std::vector<RunRecord> & all() const { return records_; }

private:
  std::vector<RunRecord> records_;
};

using Sel = std::vector<const RunMetrics *>;

double share(const Sel & s, const std::function<bool(const RunMetrics &)> & pred)
{
  if (s.empty()) {
    return std::nan("");
  }
  const auto k = std::count_if(s.begin(), s.end(), [&](const RunMetrics * m) { return pred(*m); });
  return static_cast<double>(k) / static_cast<double>(s.size());
}

std::vector<double> values(const Sel & s, const std::function<std::optional<double>(const RunMetrics &)> & f)
{
  std::vector<double> out;
  for (const auto * m : s) {
    if (const auto v = f(*m)) {
      out.push_back(*v);
    }
  }
  return out;
}

double mean_of(const std::vector<double> & v)
{
  if (v.empty()) {
    return std::nan("");
  }
  double sum = 0.0;
  for (double x : v) {
    sum += x;
  }
  return sum / static_cast<double>(v.size());
}

double median_of(std::vector<double> v)
{
  return aebsim::summarize(std::move(v)).p50;
}

double sum_of(const Sel & s, const std::function<double(const RunMetrics &)> & f)
{
  double total = 0.0;
  for (const auto * m : s) {
    total += f(*m);
  }
  return total;
}

Records run_experiment(const std::filesystem::path & path, int jobs)
{
  auto config = aebsim::load_experiment(path);
  config.parallelism = jobs;
  const auto results = aebsim::execute(config, aebsim::plan(config), jobs, false);
  std::vector<RunRecord> records;
  records.reserve(results.size());
  for (const auto & r : results) {
    records.push_back(r.record);
  }
  return Records(std::move(records));
}

std::string pct(double x) { return fmt::format("{:.1f}%", 100.0 * x); }

// 1. Baseline safety.
Result baseline_safety(const Records & d)
{
  Result r;
  const auto base = d.select("*", "baseline");
  const double collisions = share(base, [](const RunMetrics & m) { return m.collision; });
  r.check(collisions == 0.0, fmt::format("collision rate {} == 0", pct(collisions)));
  const double eb = share(base, [](const RunMetrics & m) { return m.eb_event_count > 0; });
  r.check(
    eb >= kBaselineEbRateLo && eb <= kBaselineEbRateHi,
    fmt::format("EB rate {} in [{}, {}]", pct(eb), pct(kBaselineEbRateLo), pct(kBaselineEbRateHi)));
  double worst_onset = 0.0;
  for (const auto * m : base) {
    for (double t : m->eb_onset_truth_ttc) {
      worst_onset = std::max(worst_onset, t);
    }
  }
  r.check(worst_onset < kOnsetTruthTtc, fmt::format("max truth TTC at EB onset {:.2f} s < {}", worst_onset, kOnsetTruthTtc));
  const double osc = share(base, [](const RunMetrics & m) { return m.oscillatory; });
  r.check(osc == 0.0, fmt::format("oscillatory runs {} == 0", pct(osc)));
  const double smooth = share(base, [](const RunMetrics & m) { return m.peak_jerk < kJerkBar; });
  r.check(smooth >= kJerkShare, fmt::format("peak jerk < {} in {} >= {}", kJerkBar, pct(smooth), pct(kJerkShare)));
  r.check(base.size() == 720, fmt::format("{} baseline runs", base.size()));
  return r;
}

// 2. False-negative effect on hazard approaches.
Result false_negative(const Records & h)
{
  Result r;
  const auto base = h.select("HighwayFollowing", "baseline");
  const auto fn = h.select("HighwayFollowing", "fn");
  const double base_col = share(base, [](const RunMetrics & m) { return m.collision; });
  const double fn_col = share(fn, [](const RunMetrics & m) { return m.collision; });
  r.check(base_col == 0.0, fmt::format("baseline collisions {}", pct(base_col)));
  r.check(fn_col >= kFnCollisionRate, fmt::format("FN collision rate {} >= {}", pct(fn_col), pct(kFnCollisionRate)));
  const double delay = median_of(values(fn, [](const RunMetrics & m) { return m.brake_onset_delay; }));
  r.check(delay >= kFnMedianDelay - kGridEps, fmt::format("median brake onset delay {:.2f} s >= {}", delay, kFnMedianDelay));
  const double ttc_base = median_of(values(base, [](const RunMetrics & m) { return m.min_ttc_truth; }));
  const double ttc_fn = median_of(values(fn, [](const RunMetrics & m) { return m.min_ttc_truth; }));
  r.check(
    ttc_fn <= kFnMinTtcRatio * ttc_base,
    fmt::format("median min TTC {:.2f} s vs baseline {:.2f} s (ratio {:.2f} <= {})", ttc_fn, ttc_base, ttc_fn / ttc_base, kFnMinTtcRatio));
  return r;
}

std::vector<double> collect(const Sel & s, std::vector<double> RunMetrics::*field)
{
  std::vector<double> out;
  for (const auto * m : s) {
    out.insert(out.end(), (m->*field).begin(), (m->*field).end());
  }
  return out;
}

double hard_share(const std::vector<double> & peaks)
{
  if (peaks.empty()) {
    return 0.0;
  }
  const auto k = std::count_if(peaks.begin(), peaks.end(), [](double p) { return p > kFpHardDecel; });
  return static_cast<double>(k) / static_cast<double>(peaks.size());
}

// 3. False-positive effect.
Result false_positive(const Records & d)
{
  Result r;
  const auto hw = d.select("HighwayFollowing", "fp");
  const double feb = share(hw, [](const RunMetrics & m) { return m.false_eb_count > 0; });
  r.check(feb >= kFpFalseEbRate, fmt::format("highway false-EB rate {} >= {}", pct(feb), pct(kFpFalseEbRate)));
  const auto all_fp = d.select("*", "fp");
  const double col = share(all_fp, [](const RunMetrics & m) { return m.collision; });
  r.check(col == 0.0, fmt::format("collisions under phantom injection {}", pct(col)));
  const double fp_hard = hard_share(collect(all_fp, &RunMetrics::false_eb_peak_decels));
  const double base_hard =
    share(d.select("*", "baseline"), [](const RunMetrics & m) { return m.peak_decel > kFpHardDecel; });
  r.check(
    fp_hard > base_hard,
    fmt::format("peak decel > {}: {} of false-EB episodes vs {} of baseline runs", kFpHardDecel, pct(fp_hard), pct(base_hard)));
  const auto mv = d.select("MultiVehicle", "fp");
  const double close = share(mv, [](const RunMetrics & m) {
    return m.follower_headway_after_false_eb && *m.follower_headway_after_false_eb < kFollowerHeadway;
  });
  r.check(close >= kFollowerShare, fmt::format("MultiVehicle follower headway < {} s after false EB in {} >= {}", kFollowerHeadway, pct(close), pct(kFollowerShare)));
  return r;
}

double mean_delay(const Records & h, const std::string & family, const std::string & condition)
{
  return mean_of(values(h.select(family, condition), [](const RunMetrics & m) { return m.brake_onset_delay; }));
}

// 4. Distance bias.
Result distance_bias(const Records & d, const Records & h)
{
  Result r;
  const double base_delay = mean_delay(h, "HighwayFollowing", "baseline");
  const double plus_delay = mean_delay(h, "HighwayFollowing", "bias_plus");
  r.check(
    plus_delay >= base_delay + kBiasDelayGain - kGridEps,
    fmt::format("factor 1.2 mean onset delay {:.3f} s vs baseline {:.3f} s (gain >= {})", plus_delay, base_delay, kBiasDelayGain));
  const auto eb_rate = [&](const std::string & c) {
    return share(d.select("*", c), [](const RunMetrics & m) { return m.eb_event_count > 0; });
  };
  const double eb_base = eb_rate("baseline");
  const double eb_minus = eb_rate("bias_minus");
  r.check(eb_minus >= kBiasEbRatio * eb_base, fmt::format("factor 0.8 EB rate {} vs baseline {} (>= {}x)", pct(eb_minus), pct(eb_base), kBiasEbRatio));
  const auto speed = [&](const std::string & c) {
    return mean_of(values(d.select("StopAndGo", c), [](const RunMetrics & m) { return m.mean_speed; }));
  };
  const double v_base = speed("baseline");
  const double v_minus = speed("bias_minus");
  r.check(v_minus <= kBiasSpeedRatio * v_base, fmt::format("factor 0.8 StopAndGo mean speed {:.2f} vs {:.2f} m/s (<= {}x)", v_minus, v_base, kBiasSpeedRatio));
  const double curved_gain = mean_delay(h, "CurvedRoad", "bias_plus") - mean_delay(h, "CurvedRoad", "baseline");
  const double highway_gain = plus_delay - base_delay;
  r.check(curved_gain > highway_gain, fmt::format("curved delay gain {:.3f} s > highway {:.3f} s", curved_gain, highway_gain));
  return r;
}

// 5. Temporal instability.
Result temporal_instability(const Records & d)
{
  Result r;
  const auto osc = [&](const std::string & f) {
    return share(d.select(f, "flicker"), [](const RunMetrics & m) { return m.oscillatory; });
  };
  const double cutin = osc("CutIn");
  const double highway = osc("HighwayFollowing");
  r.check(cutin >= kFlickerOscRate, fmt::format("CutIn oscillatory rate {} >= {}", pct(cutin), pct(kFlickerOscRate)));
  r.check(cutin > highway, fmt::format("CutIn {} > HighwayFollowing {}", pct(cutin), pct(highway)));
  const auto jerk = [&](const std::string & c) {
    return mean_of(values(d.select("*", c), [](const RunMetrics & m) { return m.mean_abs_jerk; }));
  };
  const double j_flicker = jerk("flicker");
  const double j_base = jerk("baseline");
  r.check(j_flicker >= kFlickerJerkRatio * j_base, fmt::format("mean |jerk| {:.3f} vs baseline {:.3f} (>= {}x)", j_flicker, j_base, kFlickerJerkRatio));
  return r;
}

// 6. Safeguard ablation.
Result safeguards(const Records & d, const Records & h)
{
  Result r;
  const auto false_eb = [&](const std::string & c) {
    return sum_of(d.select("*", c), [](const RunMetrics & m) { return m.false_eb_count; });
  };
  const double fp = false_eb("fp");
  const double fp_p = false_eb("fp_persistence");
  r.check(fp_p <= (1.0 - kPersistenceCut) * fp, fmt::format("persistence: false-EB episodes {} -> {}", fp, fp_p));

  const auto jerk = [&](const std::string & c) {
    return mean_of(values(d.select("*", c), [](const RunMetrics & m) { return m.mean_abs_jerk; }));
  };
  const auto osc = [&](const std::string & c) {
    return share(d.select("*", c), [](const RunMetrics & m) { return m.oscillatory; });
  };
  r.check(
    jerk("flicker_rate_limit") <= (1.0 - kRateLimitJerkCut) * jerk("flicker"),
    fmt::format("rate limiter: flicker mean |jerk| {:.3f} -> {:.3f}", jerk("flicker"), jerk("flicker_rate_limit")));
  r.check(
    osc("flicker_rate_limit") <= (1.0 - kRateLimitOscCut) * osc("flicker"),
    fmt::format("rate limiter: oscillatory rate {} -> {}", pct(osc("flicker")), pct(osc("flicker_rate_limit"))));

  const auto col = [](const Sel & s) { return share(s, [](const RunMetrics & m) { return m.collision; }); };
  const double fn = col(h.select("*", "fn"));
  const double fn_fb = col(h.select("*", "fn_fallback"));
  r.check(fn_fb <= (1.0 - kFallbackFnCut) * fn, fmt::format("fallback: FN collision rate {} -> {}", pct(fn), pct(fn_fb)));

  double col_off = 0.0, col_on = 0.0, feb_off = 0.0, feb_on = 0.0;
  std::vector<double> tt_off, tt_on;
  for (const auto & c : kPlainConditions) {
    const auto off = d.select("*", c);
    const auto on = d.select("*", c + "_all");
    col_off += sum_of(off, [](const RunMetrics & m) { return m.collision ? 1.0 : 0.0; });
    col_on += sum_of(on, [](const RunMetrics & m) { return m.collision ? 1.0 : 0.0; });
    feb_off += sum_of(off, [](const RunMetrics & m) { return m.false_eb_count; });
    feb_on += sum_of(on, [](const RunMetrics & m) { return m.false_eb_count; });
    for (const auto * m : off) {
      tt_off.push_back(m->travel_time);
    }
    for (const auto * m : on) {
      tt_on.push_back(m->travel_time);
    }
  }
  r.check(col_on <= (1.0 - kAllOnCollisionCut) * col_off, fmt::format("all on: collisions {} -> {}", col_off, col_on));
  r.check(feb_on <= (1.0 - kAllOnFalseEbCut) * feb_off, fmt::format("all on: false-EB episodes {} -> {}", feb_off, feb_on));
  const double t_off = mean_of(tt_off);
  const double t_on = mean_of(tt_on);
  r.check(
    t_on <= (1.0 + kAllOnTravelIncrease) * t_off,
    fmt::format("all on: mean travel time {:.2f} -> {:.2f} s ({:+.1f}%)", t_off, t_on, 100.0 * (t_on / t_off - 1.0)));
  return r;
}

// 7. Unit oracles.
Result unit_oracles()
{
  Result r;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * u01(gen); };

  // Lagged integrator against the closed form, constant command from t = 0.
  double worst = 0.0;
  aebsim::ActuatorModel act;
  for (int trial = 0; trial < 200; ++trial) {
    const double c = uni(-3.0, 2.0);
    aebsim::EgoState ego;
    ego.v = uni(25.0, 35.0);
    ego.a = uni(-3.0, 2.0);
    const aebsim::oracle::LagClosedForm ref{ego.v, ego.a, c, act.tau};
    const double s0 = ego.s_front;
    for (int k = 1; k <= 300; ++k) {
      ego = aebsim::step_ego(ego, c, act, 0.01);
      const double t = 0.01 * k;
      const auto rel = [](double got, double want) {
        return std::abs(got - want) / std::max(1.0, std::abs(want));
      };
      worst = std::max({worst, rel(ego.v, ref.velocity(t)), rel(ego.a, ref.accel(t)),
                        rel(ego.s_front - s0, ref.displacement(t))});
    }
  }
  r.check(worst <= kLagRelTol, fmt::format("lag integrator worst relative error {:.2e}", worst));

  // Rate limiter per-step bound.
  aebsim::SafeguardConfig sg;
  sg.rate_limit = true;
  int violations = 0;
  double prev = 0.0;
  const double dt = 0.1;
  for (int i = 0; i < kRandomSteps; ++i) {
    const double requested = uni(-10.0, 3.0);
    const double out = aebsim::guard_rate_limit(prev, requested, dt, sg);
    const double limit = out < prev ? sg.jerk_limit_apply : sg.jerk_limit_release;
    if (std::abs(out - prev) > limit * dt + 1e-12) {
      ++violations;
    }
    prev = out;
  }
  r.check(violations == 0, fmt::format("rate limiter violations {} over {} steps", violations, kRandomSteps));

  // Persistence gate over random track sequences through the full control stack.
  sg = aebsim::SafeguardConfig{};
  sg.persistence = true;
  int leaks = 0;
  int eb_frames = 0;
  int frames = 0;
  while (frames < kRandomSteps) {
    aebsim::ControlStack stack({}, {}, sg, {}, 1);
    aebsim::EgoState ego;
    ego.v = uni(5.0, 30.0);
    int id = 1;
    int age = 1;
    for (int k = 0; k < 50; ++k, ++frames) {
      std::optional<aebsim::Track> primary;
      const double roll = u01(gen);
      if (roll < 0.15) {
        age = 0;
      } else {
        if (age == 0 || roll < 0.35) {
          ++id;
          age = 1;
        } else {
          ++age;
        }
        aebsim::Track t;
        t.track_id = id;
        t.age_frames = age;
        t.gap_est = uni(2.0, 40.0);
        t.v_rel_est = uni(-5.0, 30.0);
        primary = t;
      }
      const auto d = stack.step(primary, ego, 0.1);
      if (d.command.eb_active) {
        ++eb_frames;
        if (!primary || primary->age_frames < sg.persistence_frames) {
          ++leaks;
        }
      }
    }
  }
  r.check(leaks == 0, fmt::format("persistence leaks {} over {} frames ({} EB frames)", leaks, frames, eb_frames));

  // Oscillation detector against the brute-force window scan.
  int mismatches = 0;
  for (int s = 0; s < kOscillationSeries; ++s) {
    const auto n = static_cast<std::size_t>(uni(2.0, 2000.0));
    std::vector<double> a(n);
    const double p_flip = uni(0.05, 0.9);
    double level = uni(-4.0, 4.0);
    for (auto & x : a) {
      if (u01(gen) < p_flip) {
        level = -level + uni(-1.0, 1.0);
      }
      x = level + uni(-0.5, 0.5);
    }
    const auto got = aebsim::detect_oscillations(a, 0.1);
    const int want = aebsim::oracle::brute_force_oscillation_windows(a, 15);
    if (got.window_count != want || got.oscillatory != (want > 0)) {
      ++mismatches;
    }
  }
  r.check(mismatches == 0, fmt::format("oscillation detector mismatches {} of {}", mismatches, kOscillationSeries));

  int wilson_bad = 0;
  for (const auto & f : aebsim::oracle::kWilsonFixtures) {
    const auto ci = aebsim::wilson_interval(f.k, f.n);
    if (std::abs(ci.lo - f.lo) > kWilsonTol || std::abs(ci.hi - f.hi) > kWilsonTol) {
      ++wilson_bad;
    }
  }
  r.check(wilson_bad == 0, fmt::format("Wilson fixtures off {} of {}", wilson_bad, aebsim::oracle::kWilsonFixtures.size()));
  return r;
}

std::string slurp(const std::filesystem::path & p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 8. Determinism and condition isolation.
Result determinism(const std::filesystem::path & config_path, const std::filesystem::path & work)
{
  Result r;
  auto base = aebsim::load_experiment(config_path);
  base.runs_per_family = kDeterminismRuns;
  base.verbosity = aebsim::Verbosity::kFull;
  const auto run_into = [&](const std::string & name, int jobs) {
    auto cfg = base;
    cfg.parallelism = jobs;
    cfg.output_dir = work / name;
    std::filesystem::remove_all(cfg.output_dir);
    aebsim::prepare_output_dir(cfg.output_dir);
    aebsim::emit_outputs(aebsim::execute(cfg, aebsim::plan(cfg), jobs, true), cfg);
    return cfg.output_dir;
  };
  const auto a = run_into("first", 1);
  const auto b = run_into("second", 1);
  const auto c = run_into("parallel", 4);
  for (const char * file : {"metrics.jsonl", "summary.csv", "summary.json", "comparison.csv"}) {
    const std::string ref = slurp(a / file);
    r.check(!ref.empty() && ref == slurp(b / file), fmt::format("{} identical across repeats", file));
    r.check(ref == slurp(c / file), fmt::format("{} identical with 4 workers", file));
  }

  std::size_t compared = 0;
  std::size_t differing = 0;
  for (const auto & entry : std::filesystem::directory_iterator(a / "truth" / kPlainConditions.front())) {
    const std::string ref = slurp(entry.path());
    for (const auto & cond : kPlainConditions) {
      const auto other = a / "truth" / cond / entry.path().filename();
      ++compared;
      if (slurp(other) != ref) {
        ++differing;
      }
    }
  }
  r.check(compared > 0 && differing == 0, fmt::format("truth traces identical across conditions: {} differing of {}", differing, compared));
  return r;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"aebsim acceptance suite"};
  std::filesystem::path configs = "configs";
  std::filesystem::path work = std::filesystem::temp_directory_path() / "aebsim_acceptance";
  int jobs = 1;
  app.add_option("--configs", configs, "Directory holding default.json and hazard.json");
  app.add_option("--work", work, "Scratch directory for determinism outputs");
  app.add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    const auto matrix = run_experiment(configs / "default.json", jobs);
    const auto hazard = run_experiment(configs / "hazard.json", jobs);
    if (matrix.failed() + hazard.failed() > 0) {
      fmt::print("warning: {} runs faulted\n", matrix.failed() + hazard.failed());
    }

    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"1 baseline safety", [&] { return baseline_safety(matrix); }},
      {"2 false-negative effect", [&] { return false_negative(hazard); }},
      {"3 false-positive effect", [&] { return false_positive(matrix); }},
      {"4 distance bias", [&] { return distance_bias(matrix, hazard); }},
      {"5 temporal instability", [&] { return temporal_instability(matrix); }},
      {"6 safeguard ablation", [&] { return safeguards(matrix, hazard); }},
      {"7 unit oracles", [] { return unit_oracles(); }},
      {"8 determinism and isolation", [&] { return determinism(configs / "default.json", work); }},
    };
    int failures = 0;
    for (const auto & [name, fn] : criteria) {
      const Result res = fn();
      failures += res.passed ? 0 : 1;
      fmt::print("{} criterion {}\n", res.passed ? "PASS" : "FAIL", name);
      for (const auto & note : res.notes) {
        fmt::print("    {}\n", note);
      }
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
    return failures == 0 ? 0 : 1;
  } catch (const std::exception & e) {
    fmt::print(stderr, "acceptance error: {}\n", e.what());
    return 2;
  }
}
