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

#ifndef AEBSIM__TRACE_IO_HPP_
#define AEBSIM__TRACE_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aebsim/harness.hpp"
#include "aebsim/trace.hpp"

namespace aebsim
{

/// CSV with a two-line comment preamble: schema version, then run metadata.
std::string format_trace(const RunTrace & trace);
RunTrace parse_trace(std::istream & in);

void write_trace(const std::filesystem::path & path, const RunTrace & trace);
RunTrace read_trace(const std::filesystem::path & path);

void write_records(const std::filesystem::path & path, const std::vector<RunRecord> & records);
std::vector<RunRecord> read_records(const std::filesystem::path & path);

void write_text(const std::filesystem::path & path, const std::string & text);

}  // namespace aebsim

#endif  // AEBSIM__TRACE_IO_HPP_
