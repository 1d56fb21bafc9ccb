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

#ifndef AEBSIM__ERROR_HPP_
#define AEBSIM__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace aebsim
{

/// Invalid configuration or non-finite input. Always fatal for the run.
class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(const std::string & what) : std::runtime_error(what) {}
};

/// Stored artifact (trace, record) cannot be read or has the wrong schema.
class FormatError : public std::runtime_error
{
public:
  explicit FormatError(const std::string & what) : std::runtime_error(what) {}
};

}  // namespace aebsim

#endif  // AEBSIM__ERROR_HPP_
