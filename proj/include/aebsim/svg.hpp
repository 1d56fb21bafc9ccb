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

#ifndef AEBSIM__SVG_HPP_
#define AEBSIM__SVG_HPP_

#include <string>
#include <vector>

namespace aebsim::svg
{

struct BarSeries
{
  std::string name;
  std::vector<double> values;  ///< one per category
};

std::string grouped_bars(
  const std::string & title, const std::string & y_label, const std::vector<std::string> & categories,
  const std::vector<BarSeries> & series);

struct Distribution
{
  std::string label;
  std::vector<double> values;
};

/// Box plot: whiskers at p5 / p95, box at the quartiles, dot at the mean.
std::string box_plot(
  const std::string & title, const std::string & y_label, const std::vector<Distribution> & groups);

struct Line
{
  std::string name;
  std::vector<double> y;
};

std::string time_series(
  const std::string & title, const std::vector<double> & t, const std::vector<Line> & lines);

}  // namespace aebsim::svg

#endif  // AEBSIM__SVG_HPP_
