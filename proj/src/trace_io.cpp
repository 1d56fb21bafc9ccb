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

#include "aebsim/trace_io.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aebsim/config.hpp"
#include "aebsim/error.hpp"

namespace aebsim
{

namespace
{

constexpr const char * kColumns =
  "t,s_front,v,a_realized,a_cmd,source,eb_active,truth_gap,truth_vrel,truth_ttc,perceived_gap,"
  "perceived_vrel,track_id,track_age,instability,fallback_active,attack_active,phantom_active,"
  "follower_gap,follower_v";
constexpr const char * kMagic = "# aebsim-trace schema=";
constexpr const char * kMetaPrefix = "# meta ";

Json meta_json(const TraceMeta & m)
{
  return {
    {"family", m.family},
    {"seed", m.seed},
    {"condition", m.condition},
    {"frame_dt", m.frame_dt},
    {"ttc_threshold", m.ttc_threshold},
    {"route_length", number_to_json(m.route_length)},
    {"initial_gap", number_to_json(m.initial_gap)},
    {"has_follower", m.has_follower},
    {"collided", m.collided},
    {"collision_object", m.collision_object},
    {"collision_time", m.collision_time},
    {"impact_speed", m.impact_speed},
    {"duration", m.duration},
  };
}

TraceMeta meta_from_json(const Json & j)
{
  TraceMeta m;
  m.family = j.at("family").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.condition = j.at("condition").get<std::string>();
  m.frame_dt = j.at("frame_dt").get<double>();
  m.ttc_threshold = j.at("ttc_threshold").get<double>();
  m.route_length = number_from_json(j.at("route_length"));
  m.initial_gap = number_from_json(j.at("initial_gap"));
  m.has_follower = j.at("has_follower").get<bool>();
  m.collided = j.at("collided").get<bool>();
  m.collision_object = j.at("collision_object").get<int>();
  m.collision_time = j.at("collision_time").get<double>();
  m.impact_speed = j.at("impact_speed").get<double>();
  m.duration = j.at("duration").get<double>();
  return m;
}

double to_double(const std::string & s, std::size_t line)
{
  char * end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw FormatError(fmt::format("trace line {}: bad number '{}'", line, s));
  }
  return v;
}

int to_int(const std::string & s, std::size_t line)
{
  char * end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw FormatError(fmt::format("trace line {}: bad integer '{}'", line, s));
  }
  return static_cast<int>(v);
}

}  // namespace

std::string format_trace(const RunTrace & trace)
{
  std::string out;
  out.reserve(trace.rows.size() * 220 + 512);
  auto it = std::back_inserter(out);
  fmt::format_to(it, "{}{}\n", kMagic, trace.meta.schema_version);
  fmt::format_to(it, "{}{}\n", kMetaPrefix, meta_json(trace.meta).dump());
  fmt::format_to(it, "{}\n", kColumns);
  for (const auto & r : trace.rows) {
    fmt::format_to(
      it, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:d},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},",
      r.t, r.s_front, r.v, r.a_realized, r.a_cmd, to_string(r.source), r.eb_active ? 1 : 0,
      r.truth_gap, r.truth_vrel, r.truth_ttc, r.perceived_gap, r.perceived_vrel);
    fmt::format_to(
      it, "{},{},{:.17g},{:d},{:d},{:d},{:.17g},{:.17g}\n", r.track_id, r.track_age, r.instability,
      r.fallback_active ? 1 : 0, r.attack_active ? 1 : 0, r.phantom_active ? 1 : 0, r.follower_gap,
      r.follower_v);
  }
  return out;
}

RunTrace parse_trace(std::istream & in)
{
  RunTrace trace;
  std::string line;
  if (!std::getline(in, line) || line.rfind(kMagic, 0) != 0) {
    throw FormatError("trace: missing schema header");
  }
  const int version = to_int(line.substr(std::string(kMagic).size()), 1);
  if (version != kTraceSchemaVersion) {
    throw FormatError(fmt::format(
      "trace schema version {} is not supported (expected {})", version, kTraceSchemaVersion));
  }
  if (!std::getline(in, line) || line.rfind(kMetaPrefix, 0) != 0) {
    throw FormatError("trace: missing metadata line");
  }
  try {
    trace.meta = meta_from_json(Json::parse(line.substr(std::string(kMetaPrefix).size())));
  } catch (const nlohmann::json::exception & e) {
    throw FormatError(std::string("trace metadata: ") + e.what());
  }
  trace.meta.schema_version = version;
  if (!std::getline(in, line) || line != kColumns) {
    throw FormatError("trace: unexpected column header");
  }
  std::size_t lineno = 3;
  std::vector<std::string> cells;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    cells.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (cells.size() != 20) {
      throw FormatError(fmt::format("trace line {}: expected 20 fields, got {}", lineno, cells.size()));
    }
    TraceRow r;
    r.t = to_double(cells[0], lineno);
    r.s_front = to_double(cells[1], lineno);
    r.v = to_double(cells[2], lineno);
    r.a_realized = to_double(cells[3], lineno);
    r.a_cmd = to_double(cells[4], lineno);
    const auto source = parse_command_source(cells[5]);
    if (!source) {
      throw FormatError(fmt::format("trace line {}: unknown source '{}'", lineno, cells[5]));
    }
    r.source = *source;
    r.eb_active = to_int(cells[6], lineno) != 0;
    r.truth_gap = to_double(cells[7], lineno);
    r.truth_vrel = to_double(cells[8], lineno);
    r.truth_ttc = to_double(cells[9], lineno);
    r.perceived_gap = to_double(cells[10], lineno);
    r.perceived_vrel = to_double(cells[11], lineno);
    r.track_id = to_int(cells[12], lineno);
    r.track_age = to_int(cells[13], lineno);
    r.instability = to_double(cells[14], lineno);
    r.fallback_active = to_int(cells[15], lineno) != 0;
    r.attack_active = to_int(cells[16], lineno) != 0;
    r.phantom_active = to_int(cells[17], lineno) != 0;
    r.follower_gap = to_double(cells[18], lineno);
    r.follower_v = to_double(cells[19], lineno);
    trace.rows.push_back(r);
  }
  return trace;
}

void write_text(const std::filesystem::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw FormatError("write failed for " + path.string());
  }
}

void write_trace(const std::filesystem::path & path, const RunTrace & trace)
{
  write_text(path, format_trace(trace));
}

RunTrace read_trace(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open trace " + path.string());
  }
  return parse_trace(in);
}

void write_records(const std::filesystem::path & path, const std::vector<RunRecord> & records)
{
  std::string text;
  for (const auto & r : records) {
    text += record_to_json(r).dump();
    text += '\n';
  }
  write_text(path, text);
}

std::vector<RunRecord> read_records(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open metrics file " + path.string());
  }
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const nlohmann::json::exception & e) {
      throw FormatError(std::string("metrics file: ") + e.what());
    }
  }
  return out;
}

}  // namespace aebsim
