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

#include "aebsim/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <map>
#include <set>
#include <thread>

#include "aebsim/config.hpp"
#include "aebsim/error.hpp"
#include "aebsim/rng.hpp"
#include "aebsim/svg.hpp"
#include "aebsim/trace_io.hpp"

namespace aebsim
{

void ExperimentConfig::validate() const
{
  if (runs_per_family <= 0) {
    throw ConfigError("experiment: runs_per_family must be positive");
  }
  if (families.empty()) {
    throw ConfigError("experiment: no scenario families");
  }
  if (std::set<ScenarioFamily>(families.begin(), families.end()).size() != families.size()) {
    throw ConfigError("experiment: duplicate scenario family");
  }
  if (conditions.empty()) {
    throw ConfigError("experiment: no conditions");
  }
  if (parallelism < 1) {
    throw ConfigError("experiment: parallelism must be at least 1");
  }
  std::set<std::string> labels;
  for (const auto & c : conditions) {
    if (c.label.empty() || c.label == "*") {
      throw ConfigError("experiment: invalid condition label '" + c.label + "'");
    }
    if (!labels.insert(c.label).second) {
      throw ConfigError("experiment: duplicate condition label '" + c.label + "'");
    }
    aebsim::validate(c.attack);
    c.safeguards.validate();
    for (auto f : c.families) {
      if (std::find(families.begin(), families.end(), f) == families.end()) {
        throw ConfigError(
          "condition '" + c.label + "': family " + std::string(to_string(f)) +
          " is not part of the experiment");
      }
    }
  }
  pipeline.validate();
  calibration.validate();
}

std::uint64_t scenario_seed(std::uint64_t root_seed, ScenarioFamily family, int run_index)
{
  return derive_seed(
    root_seed, {static_cast<std::uint64_t>(Stream::kScenario),
                static_cast<std::uint64_t>(family_ordinal(family)),
                static_cast<std::uint64_t>(run_index)});
}

std::vector<RunDescriptor> plan(const ExperimentConfig & config)
{
  config.validate();
  std::vector<RunDescriptor> out;
  for (auto family : config.families) {
    for (int i = 0; i < config.runs_per_family; ++i) {
      const std::uint64_t seed = scenario_seed(config.root_seed, family, i);
      for (std::size_t c = 0; c < config.conditions.size(); ++c) {
        const auto & fams = config.conditions[c].families;
        if (!fams.empty() && std::find(fams.begin(), fams.end(), family) == fams.end()) {
          continue;
        }
        RunDescriptor d;
        d.index = out.size();
        d.family = family;
        d.run_index = i;
        d.condition_index = c;
        d.scenario_seed = seed;
        d.sensor_seed = derive_seed(seed, {static_cast<std::uint64_t>(Stream::kSensor)});
        d.attack_seed = derive_seed(seed, {static_cast<std::uint64_t>(Stream::kAttack)});
        out.push_back(d);
      }
    }
  }
  return out;
}

std::string traffic_truth_csv(const ScenarioScripts & scripts, double duration)
{
  std::string out = "t,id,s_rear,v,a,lane_offset\n";
  auto it = std::back_inserter(out);
  const auto frames = static_cast<int>(std::llround(duration / kFrameDt));
  for (int k = 0; k <= frames; ++k) {
    const double t = k * kFrameDt;
    for (const auto & script : scripts.objects) {
      const auto o = script.at(t);
      fmt::format_to(
        it, "{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", t, o.id, o.s_rear, o.v, o.a,
        o.lane_offset);
    }
  }
  return out;
}

RunResult execute_one(const ExperimentConfig & config, const RunDescriptor & desc, bool keep_trace)
{
  RunResult result;
  auto & rec = result.record;
  const auto & cond = config.conditions.at(desc.condition_index);
  rec.family = std::string(to_string(desc.family));
  rec.seed = desc.scenario_seed;
  rec.run_index = desc.run_index;
  rec.condition = cond.label;
  try {
    RunSetup setup;
    setup.spec = sample(desc.family, desc.scenario_seed, config.calibration);
    setup.scripts = build_scripts(setup.spec, config.calibration);
    setup.attack = cond.attack;
    setup.safeguards = cond.safeguards;
    setup.condition = cond.label;
    setup.sensor_seed = desc.sensor_seed;
    setup.attack_seed = desc.attack_seed;
    rec.params = echo_params(setup.spec);
    RunTrace trace = simulate_run(setup, config.pipeline);
    rec.metrics = compute_run_metrics(trace);
    if (keep_trace) {
      result.truth_csv = traffic_truth_csv(setup.scripts, setup.spec.duration);
      result.trace = std::move(trace);
    }
  } catch (const std::exception & e) {
    rec.metrics.reset();
    rec.error = e.what();
  }
  return result;
}

std::vector<RunResult> execute(
  const ExperimentConfig & config, const std::vector<RunDescriptor> & descriptors, int parallelism,
  bool keep_traces)
{
  std::vector<RunResult> results(descriptors.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < descriptors.size(); i = next++) {
      results[i] = execute_one(config, descriptors[i], keep_traces);
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, parallelism));
  if (n == 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pool.emplace_back(worker);
  }
  for (auto & t : pool) {
    t.join();
  }
  return results;
}

namespace
{

std::vector<MetricsEntry> entries_of(const std::vector<RunRecord> & records, bool pooled)
{
  std::vector<MetricsEntry> out;
  out.reserve(records.size());
  for (const auto & r : records) {
    out.push_back({pooled ? "*" : r.family, r.condition, r.metrics});
  }
  return out;
}

const Summary * summary_by_name(const GroupSummary & g, const std::string & name)
{
  static const std::map<std::string, Summary GroupSummary::*> kFields{
    {"min_gap", &GroupSummary::min_gap},
    {"min_ttc_truth", &GroupSummary::min_ttc_truth},
    {"min_ttc_perceived", &GroupSummary::min_ttc_perceived},
    {"peak_decel", &GroupSummary::peak_decel},
    {"peak_jerk", &GroupSummary::peak_jerk},
    {"mean_abs_jerk", &GroupSummary::mean_abs_jerk},
    {"brake_onset_delay", &GroupSummary::brake_onset_delay},
    {"mean_speed", &GroupSummary::mean_speed},
    {"travel_time", &GroupSummary::travel_time},
    {"min_follower_headway", &GroupSummary::min_follower_headway},
  };
  const auto it = kFields.find(name);
  return it == kFields.end() ? nullptr : &(g.*(it->second));
}

constexpr std::array<const char *, 10> kContinuous{
  "min_gap",    "min_ttc_truth",     "min_ttc_perceived", "peak_decel", "peak_jerk",
  "mean_abs_jerk", "brake_onset_delay", "mean_speed",     "travel_time", "min_follower_headway"};

}  // namespace

std::optional<double> group_metric(const GroupSummary & g, const std::string & metric)
{
  if (metric == "runs") {
    return static_cast<double>(g.runs);
  }
  if (metric == "failed") {
    return static_cast<double>(g.failed);
  }
  if (metric == "collision_rate") {
    return g.collision.rate;
  }
  if (metric == "eb_rate") {
    return g.eb.rate;
  }
  if (metric == "false_eb_rate") {
    return g.false_eb.rate;
  }
  if (metric == "oscillatory_rate") {
    return g.oscillatory.rate;
  }
  const auto dot = metric.find('.');
  if (dot == std::string::npos) {
    return std::nullopt;
  }
  const Summary * s = summary_by_name(g, metric.substr(0, dot));
  if (s == nullptr) {
    return std::nullopt;
  }
  const auto stat = metric.substr(dot + 1);
  if (stat == "mean") {
    return s->mean;
  }
  if (stat == "std") {
    return s->std;
  }
  if (stat == "p50") {
    return s->p50;
  }
  if (stat == "p95") {
    return s->p95;
  }
  if (stat == "n") {
    return static_cast<double>(s->n);
  }
  return std::nullopt;
}

std::vector<GroupSummary> summarize_records(const std::vector<RunRecord> & records)
{
  const auto e = entries_of(records, false);
  return aggregate(e);
}

std::vector<GroupSummary> summarize_pooled(const std::vector<RunRecord> & records)
{
  const auto e = entries_of(records, true);
  return aggregate(e);
}

std::vector<AssertionOutcome> check_assertions(
  const std::vector<Assertion> & assertions, const std::vector<RunRecord> & records)
{
  const auto groups = summarize_records(records);
  const auto pooled = summarize_pooled(records);
  std::vector<AssertionOutcome> out;
  for (const auto & a : assertions) {
    AssertionOutcome o{a, std::numeric_limits<double>::quiet_NaN(), false};
    const auto & pool = a.family == "*" ? pooled : groups;
    for (const auto & g : pool) {
      if (g.family == a.family && g.condition == a.condition) {
        if (const auto v = group_metric(g, a.metric)) {
          o.observed = *v;
        }
      }
    }
    const double x = o.observed;
    if (!std::isnan(x)) {
      if (a.op == "<") {
        o.passed = x < a.value;
      } else if (a.op == "<=") {
        o.passed = x <= a.value;
      } else if (a.op == ">") {
        o.passed = x > a.value;
      } else if (a.op == ">=") {
        o.passed = x >= a.value;
      } else if (a.op == "==") {
        o.passed = x == a.value;
      }
    }
    out.push_back(o);
  }
  return out;
}

void prepare_output_dir(const std::filesystem::path & dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  const auto probe = dir / ".write_probe";
  try {
    write_text(probe, "");
  } catch (const FormatError &) {
    throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

namespace
{

std::string summary_csv(const std::vector<GroupSummary> & groups)
{
  std::string out = "family,condition,runs,failed";
  for (const char * r : {"collision", "eb", "false_eb", "oscillatory"}) {
    out += fmt::format(",{0}_count,{0}_rate,{0}_ci_lo,{0}_ci_hi", r);
  }
  for (const char * c : kContinuous) {
    out += fmt::format(",{0}_n,{0}_mean,{0}_std,{0}_p50,{0}_p95", c);
  }
  out += '\n';
  auto it = std::back_inserter(out);
  for (const auto & g : groups) {
    fmt::format_to(it, "{},{},{},{}", g.family, g.condition, g.runs, g.failed);
    for (const RateStat * r : {&g.collision, &g.eb, &g.false_eb, &g.oscillatory}) {
      fmt::format_to(it, ",{},{:.17g},{:.17g},{:.17g}", r->count, r->rate, r->ci.lo, r->ci.hi);
    }
    for (const char * c : kContinuous) {
      const Summary * s = summary_by_name(g, c);
      fmt::format_to(it, ",{},{:.17g},{:.17g},{:.17g},{:.17g}", s->n, s->mean, s->std, s->p50, s->p95);
    }
    out += '\n';
  }
  return out;
}

Json summary_json(const std::vector<GroupSummary> & groups)
{
  Json arr = Json::array();
  for (const auto & g : groups) {
    Json j = {{"family", g.family}, {"condition", g.condition}, {"runs", g.runs}, {"failed", g.failed}};
    const std::pair<const char *, const RateStat *> rates[] = {
      {"collision", &g.collision}, {"eb", &g.eb}, {"false_eb", &g.false_eb},
      {"oscillatory", &g.oscillatory}};
    for (const auto & [name, r] : rates) {
      j[name] = {{"count", r->count}, {"rate", r->rate}, {"ci", {r->ci.lo, r->ci.hi}}};
    }
    for (const char * c : kContinuous) {
      const Summary * s = summary_by_name(g, c);
      j[c] = {{"n", s->n}, {"mean", number_to_json(s->mean)}, {"std", number_to_json(s->std)},
              {"p50", number_to_json(s->p50)}, {"p95", number_to_json(s->p95)}};
    }
    arr.push_back(j);
  }
  return arr;
}

std::vector<std::string> condition_labels(const std::vector<RunRecord> & records)
{
  std::vector<std::string> out;
  for (const auto & r : records) {
    if (std::find(out.begin(), out.end(), r.condition) == out.end()) {
      out.push_back(r.condition);
    }
  }
  return out;
}

std::string trace_name(const RunRecord & r)
{
  return fmt::format("{}_{:03d}.csv", r.family, r.run_index);
}

}  // namespace

std::string comparison_table(
  const std::vector<RunRecord> & records, const std::vector<std::string> & labels)
{
  static const std::vector<std::string> kMetrics{
    "collision_rate",      "eb_rate",           "false_eb_rate",        "oscillatory_rate",
    "min_ttc_truth.p50",   "peak_decel.mean",   "mean_abs_jerk.mean",   "brake_onset_delay.mean",
    "mean_speed.mean",     "travel_time.mean",  "min_follower_headway.p50"};
  auto groups = summarize_records(records);
  const auto pooled = summarize_pooled(records);
  groups.insert(groups.end(), pooled.begin(), pooled.end());

  std::vector<std::string> families;
  for (const auto & g : groups) {
    if (std::find(families.begin(), families.end(), g.family) == families.end()) {
      families.push_back(g.family);
    }
  }
  std::string out = "family,metric";
  for (const auto & l : labels) {
    out += "," + l;
  }
  for (std::size_t i = 1; i < labels.size(); ++i) {
    out += ",rel_change_" + labels[i];
  }
  out += '\n';
  for (const auto & fam : families) {
    for (const auto & metric : kMetrics) {
      std::vector<double> vals;
      for (const auto & l : labels) {
        double v = std::numeric_limits<double>::quiet_NaN();
        for (const auto & g : groups) {
          if (g.family == fam && g.condition == l) {
            v = group_metric(g, metric).value_or(v);
          }
        }
        vals.push_back(v);
      }
      out += fam + "," + metric;
      for (double v : vals) {
        out += fmt::format(",{:.17g}", v);
      }
      for (std::size_t i = 1; i < vals.size(); ++i) {
        const double base = vals[0];
        const double rel = base != 0.0 ? (vals[i] - base) / std::abs(base)
                                        : std::numeric_limits<double>::quiet_NaN();
        out += fmt::format(",{:.17g}", rel);
      }
      out += '\n';
    }
  }
  return out;
}

void write_charts(const std::vector<RunRecord> & records, const std::filesystem::path & dir)
{
  std::filesystem::create_directories(dir);
  const auto labels = condition_labels(records);
  const auto pooled = summarize_pooled(records);
  svg::BarSeries collisions{"collision rate", {}};
  svg::BarSeries false_eb{"false EB rate", {}};
  for (const auto & l : labels) {
    for (const auto & g : pooled) {
      if (g.condition == l) {
        collisions.values.push_back(g.collision.rate);
        false_eb.values.push_back(g.false_eb.rate);
      }
    }
  }
  write_text(
    dir / "rates_by_condition.svg",
    svg::grouped_bars("Collision and false EB rate by condition", "rate", labels, {collisions, false_eb}));

  // per-family collision bars, one series per condition
  const auto groups = summarize_records(records);
  std::vector<std::string> families;
  for (const auto & g : groups) {
    if (std::find(families.begin(), families.end(), g.family) == families.end()) {
      families.push_back(g.family);
    }
  }
  std::vector<svg::BarSeries> per_cond;
  for (const auto & l : labels) {
    svg::BarSeries s{l, {}};
    for (const auto & fam : families) {
      double v = 0.0;
      for (const auto & g : groups) {
        if (g.family == fam && g.condition == l) {
          v = g.collision.rate;
        }
      }
      s.values.push_back(v);
    }
    per_cond.push_back(std::move(s));
  }
  write_text(
    dir / "collisions_by_family.svg",
    svg::grouped_bars("Collision rate by family and condition", "rate", families, per_cond));

  auto dist = [&](auto getter) {
    std::vector<svg::Distribution> out;
    for (const auto & l : labels) {
      svg::Distribution d{l, {}};
      for (const auto & r : records) {
        if (r.condition == l && r.metrics) {
          d.values.push_back(getter(*r.metrics));
        }
      }
      out.push_back(std::move(d));
    }
    return out;
  };
  write_text(
    dir / "peak_decel.svg",
    svg::box_plot("Peak deceleration by condition", "m/s^2",
                  dist([](const RunMetrics & m) { return m.peak_decel; })));
  write_text(
    dir / "peak_jerk.svg",
    svg::box_plot("Peak jerk by condition", "m/s^3",
                  dist([](const RunMetrics & m) { return m.peak_jerk; })));
  write_text(
    dir / "mean_abs_jerk.svg",
    svg::box_plot("Mean absolute jerk by condition", "m/s^3",
                  dist([](const RunMetrics & m) { return m.mean_abs_jerk; })));
}

void emit_outputs(const std::vector<RunResult> & results, const ExperimentConfig & config)
{
  if (results.empty()) {
    throw ConfigError("emit_outputs: no run records");
  }
  const auto & dir = config.output_dir;
  prepare_output_dir(dir);
  std::vector<RunRecord> records;
  records.reserve(results.size());
  for (const auto & r : results) {
    records.push_back(r.record);
  }
  write_records(dir / "metrics.jsonl", records);

  auto groups = summarize_records(records);
  const auto pooled = summarize_pooled(records);
  groups.insert(groups.end(), pooled.begin(), pooled.end());
  write_text(dir / "summary.csv", summary_csv(groups));
  write_text(dir / "summary.json", summary_json(groups).dump(2) + "\n");

  const auto labels = condition_labels(records);
  write_text(dir / "comparison.csv", comparison_table(records, labels));
  write_charts(records, dir / "charts");

  if (config.verbosity == Verbosity::kFull) {
    for (const auto & r : results) {
      if (!r.trace) {
        continue;
      }
      const auto tdir = dir / "traces" / r.record.condition;
      const auto gdir = dir / "truth" / r.record.condition;
      std::filesystem::create_directories(tdir);
      std::filesystem::create_directories(gdir);
      write_trace(tdir / trace_name(r.record), *r.trace);
      if (r.truth_csv) {
        write_text(gdir / trace_name(r.record), *r.truth_csv);
      }
    }
  }

  const auto outcomes = check_assertions(config.assertions, records);
  std::string report = "family,condition,metric,op,value,observed,passed\n";
  for (const auto & o : outcomes) {
    report += fmt::format(
      "{},{},{},{},{:.17g},{:.17g},{}\n", o.assertion.family, o.assertion.condition,
      o.assertion.metric, o.assertion.op, o.assertion.value, o.observed, o.passed ? 1 : 0);
  }
  write_text(dir / "assertions.csv", report);
}

ReplayReport replay(
  const std::filesystem::path & trace_file, const std::optional<std::filesystem::path> & metrics_file)
{
  if (!std::filesystem::exists(trace_file)) {
    throw FormatError(
      "no trace at " + trace_file.string() +
      "; runs recorded with metrics-only verbosity cannot be replayed");
  }
  ReplayReport report;
  const RunTrace trace = read_trace(trace_file);
  report.recomputed = compute_run_metrics(trace);
  if (!metrics_file) {
    return report;
  }
  for (const auto & r : read_records(*metrics_file)) {
    if (r.family == trace.meta.family && r.seed == trace.meta.seed &&
        r.condition == trace.meta.condition) {
      report.stored = r.metrics;
      break;
    }
  }
  if (!report.stored) {
    report.matches = false;
    report.mismatches.push_back("no stored record for this run");
    return report;
  }
  const Json a = metrics_to_json(report.recomputed);
  const Json b = metrics_to_json(*report.stored);
  for (const auto & item : a.items()) {
    if (!b.contains(item.key()) || b.at(item.key()) != item.value()) {
      report.matches = false;
      report.mismatches.push_back(fmt::format(
        "{}: stored {} recomputed {}", item.key(),
        b.contains(item.key()) ? b.at(item.key()).dump() : "missing", item.value().dump()));
    }
  }
  return report;
}

}  // namespace aebsim
