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

#include "aebsim/config.hpp"
#include "aebsim/error.hpp"
#include "aebsim/harness.hpp"
#include "aebsim/trace_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace aebsim
{
namespace
{

namespace fs = std::filesystem;

Json small_experiment_json()
{
  return Json::parse(R"({
    "name": "unit",
    "families": ["HighwayFollowing", "MultiVehicle"],
    "runs_per_family": 3,
    "root_seed": 99,
    "conditions": [
      {"label": "baseline", "attack": {"type": "none"}},
      {"label": "fp", "attack": {"type": "false_positive",
        "window": {"start": [3.0, 10.0], "duration": [0.15, 0.25]},
        "phantom_gap": [5.0, 10.0], "phantom_rel_speed": [10.0, 25.0]}}
    ]
  })");
}

fs::path scratch(const std::string & name)
{
  const auto dir = fs::temp_directory_path() / "aebsim_unit" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> dumps(const std::vector<RunResult> & results)
{
  std::vector<std::string> out;
  for (const auto & r : results) {
    out.push_back(record_to_json(r.record).dump());
  }
  return out;
}

TEST(Plan, CoversEveryRunAndPairsSeedsAcrossConditions)
{
  const auto config = parse_experiment(small_experiment_json());
  const auto descs = plan(config);
  ASSERT_EQ(descs.size(), 2u * 3u * 2u);
  std::set<std::tuple<int, int, std::size_t>> seen;
  for (std::size_t i = 0; i < descs.size(); ++i) {
    const auto & d = descs[i];
    EXPECT_EQ(d.index, i);
    EXPECT_EQ(d.scenario_seed, scenario_seed(config.root_seed, d.family, d.run_index));
    seen.insert({family_ordinal(d.family), d.run_index, d.condition_index});
    for (const auto & other : descs) {
      if (other.family == d.family && other.run_index == d.run_index) {
        EXPECT_EQ(other.scenario_seed, d.scenario_seed);
        EXPECT_EQ(other.sensor_seed, d.sensor_seed);
      }
    }
  }
  EXPECT_EQ(seen.size(), descs.size());
  EXPECT_NE(
    scenario_seed(1, ScenarioFamily::kCutIn, 0), scenario_seed(1, ScenarioFamily::kCutIn, 1));
}

TEST(Execute, DeterministicAndThreadCountInvariant)
{
  const auto config = parse_experiment(small_experiment_json());
  const auto descs = plan(config);
  const auto a = dumps(execute(config, descs, 1, false));
  const auto b = dumps(execute(config, descs, 1, false));
  const auto c = dumps(execute(config, descs, 4, false));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(Execute, TrafficTruthIndependentOfCondition)
{
  const auto config = parse_experiment(small_experiment_json());
  const auto results = execute(config, plan(config), 2, true);
  for (const auto & r : results) {
    ASSERT_TRUE(r.truth_csv.has_value());
    ASSERT_TRUE(r.trace.has_value());
    EXPECT_FALSE(r.record.metrics == std::nullopt) << r.record.error;
    for (const auto & other : results) {
      if (other.record.family == r.record.family && other.record.run_index == r.record.run_index) {
        EXPECT_EQ(*other.truth_csv, *r.truth_csv);
      }
    }
  }
}

TEST(TraceIo, FormatParseRoundTripPreservesMetrics)
{
  const auto config = parse_experiment(small_experiment_json());
  const auto descs = plan(config);
  for (std::size_t i = 0; i < descs.size(); i += 3) {
    const auto result = execute_one(config, descs[i], true);
    ASSERT_TRUE(result.trace.has_value());
    std::istringstream in(format_trace(*result.trace));
    const RunTrace parsed = parse_trace(in);
    EXPECT_EQ(parsed.meta.family, result.trace->meta.family);
    EXPECT_EQ(parsed.meta.seed, result.trace->meta.seed);
    EXPECT_EQ(parsed.rows.size(), result.trace->rows.size());
    ASSERT_TRUE(result.record.metrics.has_value());
    EXPECT_EQ(compute_run_metrics(parsed), *result.record.metrics);
  }
}

TEST(TraceIo, MalformedTraceIsRejected)
{
  std::istringstream empty("");
  EXPECT_THROW(parse_trace(empty), FormatError);
  std::istringstream junk("# not a trace\nfoo,bar\n1,2\n");
  EXPECT_THROW(parse_trace(junk), FormatError);
}

TEST(Outputs, EmitThenReplayMatches)
{
  auto config = parse_experiment(small_experiment_json());
  config.output_dir = scratch("emit");
  config.verbosity = Verbosity::kFull;
  prepare_output_dir(config.output_dir);
  const auto results = execute(config, plan(config), 2, true);
  emit_outputs(results, config);
  for (const char * f : {"metrics.jsonl", "summary.csv", "summary.json", "comparison.csv"}) {
    EXPECT_TRUE(fs::exists(config.output_dir / f)) << f;
  }
  const auto records = read_records(config.output_dir / "metrics.jsonl");
  ASSERT_EQ(records.size(), results.size());
  EXPECT_EQ(record_to_json(records.front()).dump(), record_to_json(results.front().record).dump());

  int replayed = 0;
  for (const auto & entry : fs::recursive_directory_iterator(config.output_dir / "traces")) {
    if (!entry.is_regular_file()) {
      continue;
    }
    const auto report = replay(entry.path(), config.output_dir / "metrics.jsonl");
    EXPECT_TRUE(report.matches) << entry.path();
    ++replayed;
  }
  EXPECT_EQ(replayed, static_cast<int>(results.size()));
  EXPECT_THROW(replay(config.output_dir / "missing.csv", std::nullopt), FormatError);
}

TEST(Assertions, EvaluatedAgainstPooledGroups)
{
  const auto config = parse_experiment(small_experiment_json());
  std::vector<RunRecord> records;
  for (const auto & r : execute(config, plan(config), 2, false)) {
    records.push_back(r.record);
  }
  const std::vector<Assertion> checks{
    {"*", "baseline", "collision_rate", "<=", 1.0},
    {"*", "baseline", "collision_rate", ">", 1.0},
  };
  const auto out = check_assertions(checks, records);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_TRUE(out[0].passed);
  EXPECT_FALSE(out[1].passed);
}

TEST(Config, JsonRoundTrip)
{
  const auto config = parse_experiment(small_experiment_json());
  Json j = config;
  const auto again = parse_experiment(j);
  EXPECT_EQ(Json(again).dump(), j.dump());
  EXPECT_EQ(again.runs_per_family, 3);
  EXPECT_EQ(again.conditions.size(), 2u);
}

TEST(Config, ValidationRejectsBadExperiments)
{
  auto j = small_experiment_json();
  j["runs_per_family"] = 0;
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = small_experiment_json();
  j["families"] = Json::array({"Motorway"});
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = small_experiment_json();
  j["conditions"][1]["label"] = "baseline";
  EXPECT_THROW(parse_experiment(j), ConfigError);
}

TEST(Config, OverrideByPointer)
{
  auto j = small_experiment_json();
  apply_override(j, "/pipeline/sensor/range_noise_sigma", Json(0.3));
  EXPECT_DOUBLE_EQ(parse_experiment(j).pipeline.sensor.range_noise_sigma, 0.3);
}

TEST(Config, CalibrationFileMergedUnderInlineValues)
{
  const auto dir = scratch("calibration");
  {
    std::ofstream cal(dir / "cal.json");
    cal << R"({"version": "1.0", "description": "test",
               "calibration": {"hazard_prob": 0.5, "duration": 30.0}})";
    auto j = small_experiment_json();
    j["calibration_file"] = "cal.json";
    j["calibration"] = Json{{"duration", 25.0}};
    std::ofstream exp(dir / "exp.json");
    exp << j.dump();
  }
  const auto merged = read_experiment_json(dir / "exp.json");
  EXPECT_FALSE(merged.contains("calibration_file"));
  const auto config = load_experiment(dir / "exp.json");
  EXPECT_DOUBLE_EQ(config.calibration.hazard_prob, 0.5);
  EXPECT_DOUBLE_EQ(config.calibration.duration, 25.0);

  {
    std::ofstream bad(dir / "cal.json");
    bad << R"({"version": "1.0", "extra": 1, "calibration": {}})";
  }
  EXPECT_THROW(load_experiment(dir / "exp.json"), ConfigError);
  {
    std::ofstream bad(dir / "cal.json");
    bad << R"({"version": "1.0"})";
  }
  EXPECT_THROW(load_experiment(dir / "exp.json"), ConfigError);
}

}  // namespace
}  // namespace aebsim
