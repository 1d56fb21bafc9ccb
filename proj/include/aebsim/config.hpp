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

#ifndef AEBSIM__CONFIG_HPP_
#define AEBSIM__CONFIG_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "aebsim/harness.hpp"

namespace aebsim
{

using Json = nlohmann::json;

void to_json(Json & j, const Range & r);
void from_json(const Json & j, Range & r);
void to_json(Json & j, const AttackWindow & w);
void from_json(const Json & j, AttackWindow & w);
void to_json(Json & j, const AttackSpec & a);
void from_json(const Json & j, AttackSpec & a);
void to_json(Json & j, const ActuatorModel & c);
void from_json(const Json & j, ActuatorModel & c);
void to_json(Json & j, const SensorConfig & c);
void from_json(const Json & j, SensorConfig & c);
void to_json(Json & j, const TrackerConfig & c);
void from_json(const Json & j, TrackerConfig & c);
void to_json(Json & j, const AccConfig & c);
void from_json(const Json & j, AccConfig & c);
void to_json(Json & j, const AebConfig & c);
void from_json(const Json & j, AebConfig & c);
void to_json(Json & j, const SafeguardConfig & c);
void from_json(const Json & j, SafeguardConfig & c);
void to_json(Json & j, const PipelineConfig & c);
void from_json(const Json & j, PipelineConfig & c);
void to_json(Json & j, const ScenarioCalibration & c);
void from_json(const Json & j, ScenarioCalibration & c);
void to_json(Json & j, const Condition & c);
void from_json(const Json & j, Condition & c);
void to_json(Json & j, const Assertion & a);
void from_json(const Json & j, Assertion & a);
void to_json(Json & j, const ExperimentConfig & c);
void from_json(const Json & j, ExperimentConfig & c);

/// Parses and validates. Unknown keys are rejected.
ExperimentConfig parse_experiment(const Json & j);
ExperimentConfig load_experiment(const std::filesystem::path & path);
Json read_json_file(const std::filesystem::path & path);
/// Reads an experiment file, folding in the calibration file it references.
/// Inline "calibration" keys take precedence over the referenced file.
Json read_experiment_json(const std::filesystem::path & path);

/// Sets the value at a JSON pointer such as "/pipeline/aeb/ttc_threshold".
void apply_override(Json & j, const std::string & pointer, const Json & value);

/// Doubles encode non-finite values as strings so records round-trip.
Json number_to_json(double x);
double number_from_json(const Json & j);

Json metrics_to_json(const RunMetrics & m);
RunMetrics metrics_from_json(const Json & j);
Json record_to_json(const RunRecord & r);
RunRecord record_from_json(const Json & j);

}  // namespace aebsim

#endif  // AEBSIM__CONFIG_HPP_
