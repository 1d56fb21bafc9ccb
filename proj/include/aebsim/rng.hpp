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

#ifndef AEBSIM__RNG_HPP_
#define AEBSIM__RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace aebsim
{

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based seed split: the result depends only on the key sequence,
/// so adding streams or conditions never perturbs existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys)
{
  std::uint64_t h = mix64(root);
  for (auto k : keys) {
    h = mix64(h ^ mix64(k + 0x632BE59BD9B4E019ULL));
  }
  return h;
}

/// Stream tags for derive_seed.
enum class Stream : std::uint64_t {
  kScenario = 1,
  kSensor = 2,
  kAttack = 3,
};

/// Per-run random stream. Explicitly threaded through every stochastic call.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi)
  {
    return lo + (hi - lo) * unit();
  }

  double normal(double mean, double sigma)
  {
    if (sigma <= 0.0) {
      return mean;
    }
    return std::normal_distribution<double>(mean, sigma)(engine_);
  }

  bool bernoulli(double p) { return unit() < p; }

  std::uint64_t next() { return engine_(); }

private:
  double unit() { return std::generate_canonical<double, 53>(engine_); }

  std::mt19937_64 engine_;
};

}  // namespace aebsim

#endif  // AEBSIM__RNG_HPP_
