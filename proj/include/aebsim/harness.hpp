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

#ifndef AEBSIM__HARNESS_HPP_
#define AEBSIM__HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aebsim/controllers.hpp"
#include "aebsim/metrics.hpp"
#include "aebsim/perception.hpp"
#include "aebsim/scenarios.hpp"
#include "aebsim/simulation.hpp"

namespace aebsim
{

inline constexpr const char * kSoftwareVersion = "aebsim-1.0.0";

enum class Verbosity { kFull, kMetricsOnly };

struct Condition
{
  std::string label;
  AttackSpec attack;
  SafeguardConfig safeguards;
  /// Restricts the condition to a subset of the experiment families.
  std::vector<ScenarioFamily> families;
};

struct Assertion
{
  std::string family;     ///< "*" pools all families
  std::string condition;
  std::string metric;     ///< e.g. collision_rate, eb_rate, mean_abs_jerk.mean
  std::string op;         ///< <, <=, >, >=, ==
  double value{0.0};
};

struct ExperimentConfig
{
  std::string name{"experiment"};
  std::vector<ScenarioFamily> families{kAllFamilies.begin(), kAllFamilies.end()};
  int runs_per_family{120};
  std::vector<Condition> conditions;
  std::uint64_t root_seed{20240601};
  std::filesystem::path output_dir{"out"};
  Verbosity verbosity{Verbosity::kMetricsOnly};
  int parallelism{1};
  PipelineConfig pipeline;
  ScenarioCalibration calibration;
  std::vector<Assertion> assertions;

  void validate() const;
};

struct RunDescriptor
{
  std::size_t index{0};
  ScenarioFamily family{ScenarioFamily::kHighwayFollowing};
  int run_index{0};
  std::size_t condition_index{0};
  std::uint64_t scenario_seed{0};
  std::uint64_t sensor_seed{0};
  std::uint64_t attack_seed{0};
};

struct RunRecord
{
  std::string family;
  std::uint64_t seed{0};
  int run_index{0};
  std::string condition;
  std::optional<RunMetrics> metrics;
  std::string error;  ///< set when the run faulted
  std::vector<std::pair<std::string, double>> params;
  std::string version{kSoftwareVersion};
};

struct RunResult
{
  RunRecord record;
  std::optional<RunTrace> trace;
  std::optional<std::string> truth_csv;
};

std::uint64_t scenario_seed(std::uint64_t root_seed, ScenarioFamily family, int run_index);

std::vector<RunDescriptor> plan(const ExperimentConfig & config);

RunResult execute_one(
  const ExperimentConfig & config, const RunDescriptor & desc, bool keep_trace);

/// Runs every descriptor; results come back in plan order whatever the
/// thread count.
std::vector<RunResult> execute(
  const ExperimentConfig & config, const std::vector<RunDescriptor> & descriptors,
  int parallelism, bool keep_traces);

/// Ego-independent traffic ground truth for one scenario, as CSV text.
std::string traffic_truth_csv(const ScenarioScripts & scripts, double duration);

struct AssertionOutcome
{
  Assertion assertion;
  double observed{0.0};
  bool passed{false};
};

std::vector<AssertionOutcome> check_assertions(
  const std::vector<Assertion> & assertions, const std::vector<RunRecord> & records);

/// Metric lookup used by assertions and comparison tables.
std::optional<double> group_metric(const GroupSummary & g, const std::string & metric);

std::vector<GroupSummary> summarize_records(const std::vector<RunRecord> & records);

/// Pools all families of each condition into a family "*" group.
std::vector<GroupSummary> summarize_pooled(const std::vector<RunRecord> & records);

/// Creates the output tree; throws before any simulation if it is unwritable.
void prepare_output_dir(const std::filesystem::path & dir);

void emit_outputs(
  const std::vector<RunResult> & results, const ExperimentConfig & config);

std::string comparison_table(
  const std::vector<RunRecord> & records, const std::vector<std::string> & labels);

void write_charts(
  const std::vector<RunRecord> & records, const std::filesystem::path & dir);

struct ReplayReport
{
  RunMetrics recomputed;
  std::optional<RunMetrics> stored;
  bool matches{true};
  std::vector<std::string> mismatches;
};

ReplayReport replay(
  const std::filesystem::path & trace_file, const std::optional<std::filesystem::path> & metrics_file);

}  // namespace aebsim

#endif  // AEBSIM__HARNESS_HPP_
