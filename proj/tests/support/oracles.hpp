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

// Independent reference implementations shared by unit and acceptance tests.

#ifndef AEBSIM_TESTS__ORACLES_HPP_
#define AEBSIM_TESTS__ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace aebsim::oracle
{

/// Closed-form first-order lag under a constant command c from (v0, a0) at t = 0.
struct LagClosedForm
{
  double v0;
  double a0;
  double c;
  double tau;

  double accel(double t) const { return c + (a0 - c) * std::exp(-t / tau); }
  double velocity(double t) const
  {
    return v0 + c * t + (a0 - c) * tau * (1.0 - std::exp(-t / tau));
  }
  double displacement(double t) const
  {
    return v0 * t + 0.5 * c * t * t + (a0 - c) * tau * (t - tau * (1.0 - std::exp(-t / tau)));
  }
};

/// Window scan written directly from the definition: every window of
/// `window_frames` steps is tested by counting its qualifying pairs one by one.
inline int brute_force_oscillation_windows(
  std::span<const double> a, std::size_t window_frames, double magnitude = 2.0)
{
  const std::size_t n = a.size();
  int count = 0;
  std::size_t start = 0;
  while (start + 1 < n) {
    const std::size_t last = std::min(n - 1, start + window_frames);
    int changes = 0;
    for (std::size_t i = start; i < last; ++i) {
      const bool opposite = (a[i] > 0.0 && a[i + 1] < 0.0) || (a[i] < 0.0 && a[i + 1] > 0.0);
      if (opposite && std::abs(a[i]) >= magnitude && std::abs(a[i + 1]) >= magnitude) {
        ++changes;
      }
    }
    if (changes >= 2) {
      ++count;
      start = last;
    } else {
      ++start;
    }
  }
  return count;
}

struct WilsonFixture
{
  std::size_t k;
  std::size_t n;
  double lo;
  double hi;
};

/// 95% Wilson score intervals computed with an external statistics package.
inline constexpr std::array<WilsonFixture, 10> kWilsonFixtures{{
  {0, 10, 0.0, 0.27753279986288926},
  {1, 10, 0.017876213095072924, 0.40415002679523854},
  {5, 10, 0.23659309051256394, 0.7634069094874361},
  {10, 10, 0.7224672001371106, 1.0},
  {33, 120, 0.20302896661264852, 0.3609296582757681},
  {0, 720, 0.0, 0.005307044483128607},
  {18, 720, 0.01587121632915317, 0.03917047592981901},
  {1, 1, 0.2065493143772374, 1.0},
  {60, 120, 0.41193870541108385, 0.5880612945889162},
  {7, 50, 0.06950833427016288, 0.26186193710585537},
}};

}  // namespace aebsim::oracle

#endif  // AEBSIM_TESTS__ORACLES_HPP_
